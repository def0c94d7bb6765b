public class Corpus {
    private final Cart cart = new Cart();

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

    public String describePair(String first, String second) {
        String left = first.trim();
        String right = second.trim();
        String joined = left + "/" + right;
        return joined.toLowerCase();
    }

    public int clampValue(int value, int low, int high) {
        if (value < low) {
            return low;
        }
        if (value > high) {
            return high;
        }
        return value;
    }

    public int sumPositive(int[] values) {
        int total = 0;
        for (int i = 0; i < values.length; i++) {
            if (values[i] > 0) {
                total = total + values[i];
            }
        }
        return total;
    }

    public int firstNegativeIndex(int[] values) {
        for (int i = 0; i < values.length; i++) {
            if (values[i] < 0) {
                return i;
            }
        }
        return -1;
    }

    public String gradeOf(int score) {
        switch (score / 10) {
            case 10:
            case 9:
                return "A";
            case 8:
                return "B";
            case 7:
                return "C";
            default:
                return "F";
        }
    }

    public int retryUntil(Task task, int limit) {
        int attempts = 0;
        do {
            attempts = attempts + 1;
            task.run();
        } while (!task.done() && attempts < limit);
        return attempts;
    }

    public String pickLabel(boolean preferShort, String longName) {
        String label = preferShort ? "s" : longName;
        return label.trim();
    }

    public double parseOrDefault(String text, double fallback) {
        try {
            return Double.parseDouble(text.trim());
        } catch (NumberFormatException e) {
            return fallback;
        } finally {
            noteAttempt();
        }
    }

    private void noteAttempt() {
        System.out.println("attempted parse");
    }

    public int scanMatrix(int[][] grid, int needle) {
        int hits = 0;
        for (int row = 0; row < grid.length; row++) {
            for (int col = 0; col < grid[row].length; col++) {
                if (grid[row][col] == needle) {
                    hits = hits + 1;
                    continue;
                }
                if (grid[row][col] < 0) {
                    break;
                }
            }
        }
        return hits;
    }

    public String bucketFor(int size, boolean rush,
                            boolean oversize) {
        if (size > 100
                && !oversize
                || rush) {
            return "express";
        } else if (size > 10) {
            return "standard";
        }
        return "compact";
    }
}
