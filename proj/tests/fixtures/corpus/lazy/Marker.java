package fx.lazy;

public class Marker {
    int id;
}
