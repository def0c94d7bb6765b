public class Order {
    private final Cart cart;

    public Order(Cart cart) {
        this.cart = cart;
    }

    public boolean checkout(Cart cart, Card card) {
        if (!card.isValid()) {
            markFailure(cart);
            return false;
        }
        double total = cart.total();
        System.out.println("charging " + total);
        card.charge(total);
        return true;
    }

    private void markFailure(Cart cart) {
        cart.clear();
    }
}
