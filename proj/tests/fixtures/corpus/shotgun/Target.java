package fx.shotgun;

public class Target {
    private int value;

    public void update(int delta) {
        value += delta;
    }

    public int current() {
        return value;
    }
}

class Billing {
    void charge(Target target) {
        target.update(5);
    }
}

class Audit {
    void record(Target target) {
        target.update(0);
    }
}

class Sync {
    void pull(Target target) {
        target.update(-1);
    }
}
