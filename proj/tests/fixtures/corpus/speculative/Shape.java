package fx.speculative;

public interface Shape {
    double area(double scale);
}

class Circle implements Shape {
    private final double radius;

    Circle(double radius) {
        this.radius = radius;
    }

    @Override
    public double area(double scale) {
        return scale * radius * radius * 3.14159;
    }
}
