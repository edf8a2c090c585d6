"""Reference Orlicz norms at 50 digits. Regenerate with: python3 make_golden.py > orlicz_golden.csv"""
import mpmath as mp

mp.mp.dps = 50


def huber(c):
    c = mp.mpf(c)
    return lambda x: x * x / 2 if x <= c else c * (x - c / 2)


def l1l2(x):
    return 2 * (mp.sqrt(1 + x * x / 2) - 1)


def fair(c):
    c = mp.mpf(c)
    return lambda x: c * c * (x / c - mp.log(1 + x / c))


FUNCTIONS = {
    "huber:0.1": huber("0.1"),
    "huber:1": huber("1"),
    "l1l2": l1l2,
    "fair:1": fair("1"),
}

VECTORS = [
    ["1", "1"],
    ["3", "-4"],
    ["0.5", "0", "-2", "7", "0.001"],
    ["100", "1e-3", "1e-3", "1e-3"],
    ["0.02", "0.03", "-0.01"],
    ["1e6", "-2.5e5", "3"],
]


def norm(g, y):
    g1 = g(mp.mpf(1))
    f = lambda a: sum(g(abs(v) / a) for v in y) / g1 - 1
    lo = mp.mpf("1e-30")
    hi = sum(abs(v) for v in y) * 10
    return mp.findroot(f, (lo, hi), solver="anderson", tol=mp.mpf("1e-45"))


print("function,vector,norm")
for name, g in FUNCTIONS.items():
    for vec in VECTORS:
        y = [mp.mpf(v) for v in vec]
        print(f"{name},{' '.join(vec)},{mp.nstr(norm(g, y), 25)}")
