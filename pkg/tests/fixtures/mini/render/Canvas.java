package render;

import shapes.Circle;

public class Canvas {
    private int width;
    private int height;
    private Log log;

    public void paint(Circle c) {
        log.write("paint");
        width = width + 1;
    }

    public int size() {
        return width * height;
    }
}
