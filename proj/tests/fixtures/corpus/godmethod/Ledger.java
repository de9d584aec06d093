package fx.godmethod;

import fx.cycle.Ring;

public class Ledger {
    private final long[] entries;

    public Ledger(long[] entries) {
        this.entries = entries;
    }

    public long summarize(int days, int fee, int tax, int bonus) {
        Ring ring = new Ring(days);
        long opening = entries[ring.slot(0)];
        long closing = entries[ring.slot(days - 1)];
        long gross = closing - opening;
        long fees = gross * fee / 100;
        long taxes = gross * tax / 100;
        long bonuses = gross * bonus / 100;
        long net = gross - fees - taxes + bonuses;
        long first = entries[0];
        long second = entries[1];
        long third = entries[2];
        long base = first + second + third;
        long average = base / 3;
        long spread = closing - average;
        long adjusted = net + spread;
        long rounded = adjusted / 10 * 10;
        long remainder = adjusted - rounded;
        long carry = remainder > 5 ? 10 : 0;
        long total = rounded + carry;
        long capped = Math.min(total, 1000000L);
        long floored = Math.max(capped, -1000000L);
        long scaled = floored * days;
        long perDay = scaled / Math.max(days, 1);
        long result = perDay + fees - fees;
        long check = result ^ opening;
        long verified = check ^ opening;
        return verified;
    }
}
