package fx.spaghetti;

public class Router {
    public String route(String path, int method, boolean secure) {
        String target = "none";
        if (path.isEmpty()) {
            target = "root";
        } else if (path.startsWith("/api")) {
            if (method == 1) {
                target = "read";
            } else if (method == 2) {
                target = "write";
            }
        } else {
            for (int i = 0; i < path.length(); i++) {
                if (path.charAt(i) == '?') {
                    target = "query";
                }
            }
        }
        while (target.length() > 10) {
            target = target.substring(1);
        }
        if (!secure) {
            target = "plain-" + target;
        }
        return target;
    }
}
