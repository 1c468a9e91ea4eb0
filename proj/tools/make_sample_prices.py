#!/usr/bin/env python3
"""Writes data/synthetic_three_asset.csv: a seeded, synthetic daily price
sample (weekdays 2018-02-14 .. 2020-02-14) for an equity-like asset and two
bond-like assets. It is NOT market data; it exists so the backtest pipeline
can be exercised end to end without a vendor snapshot."""

import datetime as dt
import math
import random
import sys

SEED = 20180214
ASSETS = [
    # name, start price, annual drift, annual vol
    ("EQUITY", 75.0, 0.06, 0.14),
    ("BOND", 78.0, 0.03, 0.035),
    ("INTL_BOND", 53.0, 0.04, 0.03),
]
# Daily shocks share a common factor so the columns are correlated.
LOADINGS = [0.9, -0.2, -0.1]


def main(path):
    rng = random.Random(SEED)
    day = dt.date(2018, 2, 14)
    end = dt.date(2020, 2, 14)
    prices = [a[1] for a in ASSETS]
    dt_year = 1.0 / 252.0
    with open(path, "w", newline="\n") as out:
        out.write("date," + ",".join(a[0] for a in ASSETS) + "\n")
        while day <= end:
            if day.weekday() < 5:
                out.write(day.isoformat() + "," + ",".join(f"{p:.4f}" for p in prices) + "\n")
                common = rng.gauss(0.0, 1.0)
                for i, (_, _, mu, vol) in enumerate(ASSETS):
                    b = LOADINGS[i]
                    z = b * common + math.sqrt(1.0 - b * b) * rng.gauss(0.0, 1.0)
                    prices[i] *= math.exp((mu - 0.5 * vol * vol) * dt_year + vol * math.sqrt(dt_year) * z)
            day += dt.timedelta(days=1)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/synthetic_three_asset.csv")
