public class PaymentService {
    private boolean active = true;
    private double balance = 42.0;

    public boolean isValid() {
        return active && balance >= 0.0;
    }

    public void charge(double amount) {
        if (amount < 0.0) {
            throw new IllegalArgumentException("negative charge");
        }
        balance = balance - amount;
    }

    public void deactivate() {
        active = false;
    }
}
