"""Reference coefficient tables, transcribed verbatim.

``REFERENCE_PI[(k, l)]`` lists rows n = 0..k+l of pi_{n,i}^{k,l};
``REFERENCE_LAMBDA[(k, l)]`` lists rows n = 0..(k+l-1)/2 of lambda_{n,i}^{k,l}.
Two printed entries are misprints (sign flips); they are kept verbatim
here and listed in ``MISPRINTS`` together with the value that satisfies
the defining product/commutator identity.
"""

from fractions import Fraction as F

REFERENCE_PI = {
    (1, 0): [["1"], ["1/2", "0"]],
    (2, 0): [["1"], ["1", "0"], ["0", "-1/2", "0"]],
    (1, 1): [["1"], ["1/2", "-1/2"], ["-1/4", "-3/4", "-1/4"]],
    (3, 0): [["1"], ["3/2", "0"], ["0", "-3/2", "0"], ["-1/4", "-3/4", "0", "0"]],
    (2, 1): [["1"], ["1", "-1/2"], ["-1/2", "2", "-1/2"], ["-1/4", "-1/2", "0", "0"]],
    (4, 0): [["1"], ["2", "0"], ["0", "-3", "0"], ["-1", "-3", "0", "0"], ["0", "1/2", "3/2", "1/2", "0"]],
    (3, 1): [["1"], ["3/2", "-1/2"], ["-3/4", "-15/4", "-3/4"], ["-1", "-9/4", "0", "0"], ["1/8", "1", "15/8", "7/8", "1/8"]],
    (2, 2): [["1"], ["1", "-1"], ["-1", "-4", "-1"], ["-1/2", "-1", "1", "1/2"], ["1/4", "5/4", "9/4", "5/4", "1/4"]],
}

REFERENCE_LAMBDA = {
    (1, 0): [["1", "0"]],
    (2, 0): [["2", "0"]],
    (1, 1): [["1", "-1"]],
    (3, 0): [["3", "0"], ["-1/2", "-3/2", "0", "0"]],
    (2, 1): [["2", "-1"], ["-1/2", "-1", "0", "0"]],
    (4, 0): [["4", "0"], ["-2", "6", "0", "0"]],
    (3, 1): [["3", "-1"], ["-2", "-9/2", "0", "0"]],
    (2, 2): [["2", "-2"], ["-1", "-2", "2", "1"]],
    (5, 0): [["5", "0"], ["-5", "-15", "0", "0"], ["1", "5", "15/2", "5/2", "0", "0"]],
    (4, 1): [["4", "-1"], ["-5", "-12", "0", "0"], ["1", "9/2", "6", "2", "0", "0"]],
    (3, 2): [["3", "-2"], ["-7/2", "-15/2", "3", "3/2"], ["3/4", "3", "7/2", "0", "-1", "-1/4"]],
    (6, 0): [["6", "0"], ["-10", "-30", "0", "0"], ["6", "30", "45", "15", "0", "0"]],
    (5, 1): [["5", "-1"], ["-10", "-25", "0", "0"], ["6", "55/2", "75/2", "25/2", "0", "0"]],
    (4, 2): [["4", "-2"], ["-8", "-18", "4", "2"], ["5", "21", "26", "4", "-4", "-1"]],
    (3, 3): [["3", "-3"], ["-5", "-21/2", "21/2", "5"], ["3", "12", "21/2", "-21/2", "-12", "-3"]],
}

# (kind, k, l, n, i) -> (printed, correct)
MISPRINTS = {
    ("pi", 2, 1, 2, 1): (F(2), F(-2)),
    ("lambda", 4, 0, 1, 1): (F(6), F(-6)),
}


def reference_entries(kind):
    """Yield ((k, l, n, i), Fraction) for every printed entry of ``kind``."""
    table = {"pi": REFERENCE_PI, "lambda": REFERENCE_LAMBDA}[kind]
    for (k, l), rows in table.items():
        for n, row in enumerate(rows):
            for i, text in enumerate(row):
                yield (k, l, n, i), F(text)
