package fx.dead;

import java.util.HashMap;
import java.util.Map;

public class Cache {
    private final Map<String, String> entries = new HashMap<>();

    public String get(String key) {
        String hit = entries.get(key);
        return hit == null ? "" : hit;
    }

    public void put(String key, String value) {
        if (!value.isEmpty()) {
            entries.put(key, value);
        }
    }

    /* kept from the old lookup path */
    private String legacyLookup(String key) {
        return entries.containsKey(key) ? entries.get(key) : null;
    }
}
