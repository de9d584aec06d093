package fx.refused;

class Parent {
    public int open(int v) {
        return v + 1;
    }

    public int close(int v) {
        return v - 1;
    }

    public int reset(int v) {
        return v * 0;
    }
}

public class Child extends Parent {
    public int twice(int v) {
        return v * 2;
    }
}
