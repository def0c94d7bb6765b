public class Cart {
    private double subtotal = 0.0;
    private int items = 0;

    public void add(double price) {
        subtotal = subtotal + price;
        items = items + 1;
    }

    public double total() {
        return subtotal;
    }

    public int itemCount() {
        return items;
    }

    public void clear() {
        subtotal = 0.0;
        items = 0;
    }
}
