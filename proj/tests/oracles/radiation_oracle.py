"""Reference values for test_radiation.cpp (mpmath, 30 digits).

Steel ball (a0 = 1 cm) on wood, reference event: J, m and eps as frozen in
test_contact.cpp. Run: python3 radiation_oracle.py
"""
import mpmath as mp

mp.mp.dps = 30

E, nu, rho = mp.mpf("1.1e10"), mp.mpf("0.25"), mp.mpf(750)
cs = mp.sqrt(E / (2 * (1 + nu)) / rho)
eps = mp.mpf("0.0963466017460599381")
J = mp.mpf("0.0857316174690455048")
m = mp.mpf("0.0333218260790757403")
a0 = mp.mpf("0.01")
rho0, c0 = mp.mpf("1.2"), mp.mpf(343)
b = eps / cs


def f(t):
    return 6 * b**3 / (mp.pi * (t * t + b * b) * (t * t + 4 * b * b))


def df(t):
    return mp.diff(f, t)


def ball(listener, t, reflective):
    total = mp.mpf(0)
    for cz, axis in ((a0, 1), (-a0, -1)) if reflective else ((a0, 1),):
        d = [listener[0], listener[1], listener[2] - cz]
        r = mp.sqrt(sum(x * x for x in d))
        cos_t = axis * d[2] / r
        s = t - (r - a0) / c0
        A, dA = J * f(s) / m, J * df(s) / m
        total += rho0 * a0**3 * cos_t / 2 * (A / r**2 + dA / (c0 * r))
    return total


print("cs", cs)
for L in ((0, 0, mp.mpf("0.2")), (mp.mpf("0.1"), 0, mp.mpf("0.05"))):
    for t in ("5.5e-4", "6e-4", "7e-4"):
        t = mp.mpf(t)
        print("ball", L, t, "refl", mp.nstr(ball(L, t, True), 20), "free", mp.nstr(ball(L, t, False), 20))

# Smoothed Pekeris volume displacement: f * (slope t H(t)) for unit slope.
for t in ("-1e-4", "0", "4e-5", "2e-4", "1e-3"):
    t = mp.mpf(t)
    v = mp.quad(lambda s: f(t - s) * s, [0, max(t, 0) + b, mp.inf])
    print("smoothed_volume slope=1 t", t, mp.nstr(v, 20))
