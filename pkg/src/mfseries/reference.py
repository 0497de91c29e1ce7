"""Published complexity parameters for daily gold prices, for comparison with user-supplied data.

These need the 1985-2013 daily gold price series (China in CNY, India in
INR), which is not bundled. ``compare_to_reference`` lines a report's
complexity table up against a stored column.
"""

from __future__ import annotations

__all__ = ["GOLD_1985_2013", "GOLD_1994_2013", "compare_to_reference"]

# row -> (alpha0, W, r) for the original series and its shuffled surrogate
GOLD_1985_2013 = {
    "China (CNY)": {
        "Total (Region I)": ((0.540, 0.709, 0.410), (0.510, 0.691, 0.813)),
        "Total (Region II)": ((0.535, 0.720, 0.583), (0.510, 0.652, 0.801)),
        "Seq. maxima (R=5)": ((0.760, 1.215, 0.701), (0.510, 0.829, 0.516)),
        "Seq. minima (R=5)": ((0.709, 0.690, 0.912), (0.510, 0.677, 0.849)),
        "Seq. maxima (R=10)": ((0.850, 1.266, 0.613), (0.520, 1.023, 0.268)),
        "Seq. minima (R=10)": ((0.720, 0.756, 0.994), (0.520, 0.728, 0.982)),
    },
    "India (INR)": {
        "Total (Region I)": ((0.530, 0.507, 0.920), (0.499, 0.618, 0.489)),
        "Total (Region II)": ((0.550, 0.510, 0.867), (0.497, 0.311, 1.060)),
        "Seq. maxima (R=5)": ((0.742, 0.800, 0.613), (0.500, 0.681, 0.907)),
        "Seq. minima (R=5)": ((0.680, 0.578, 0.751), (0.500, 0.647, 1.041)),
        "Seq. maxima (R=10)": ((0.756, 0.823, 0.663), (0.510, 0.729, 0.634)),
        "Seq. minima (R=10)": ((0.708, 0.717, 0.701), (0.510, 0.654, 0.895)),
    },
}

# 1994-2013 subset; the window length of the sequences is not stated, only originals are given
GOLD_1994_2013 = {
    "China (CNY)": {"Original series": (0.532, 0.602, 0.627), "Seq. maxima": (0.848, 1.340, 0.509),
                    "Seq. minima": (0.711, 0.615, 0.820)},
    "India (INR)": {"Original series": (0.548, 0.372, 1.747), "Seq. maxima": (0.751, 0.582, 1.208),
                    "Seq. minima": (0.710, 0.719, 1.234)},
    "India (CNY)": {"Original series": (0.531, 0.575, 0.428), "Seq. maxima": (0.778, 1.172, 0.433),
                    "Seq. minima": (0.747, 0.649, 0.990)},
}


def compare_to_reference(report: dict, market: str = "China (CNY)") -> list:
    """Per-row (label, ours, reference) triples for rows present in both.

    ``ours`` and the reference are ``{"original": (alpha0, W, r), "shuffled": (...)}``;
    the shuffled values are averaged over the report's surrogates.
    """
    ref = GOLD_1985_2013[market]
    out = []
    for row in report["complexity_table"]:
        if row["row"] not in ref:
            continue
        o = row["original"]
        sm = row.get("shuffled_mean", {})
        ours = {"original": (o["alpha0"], o["W"], o["r"]),
                "shuffled": tuple(sm.get(k) for k in ("alpha0", "W", "r"))}
        ro, rs = ref[row["row"]]
        out.append((row["row"], ours, {"original": ro, "shuffled": rs}))
    return out
