"""Reference values for the single-name (Black-Cox) formulas.

Every value is obtained by direct numerical integration of the first-passage
time density of a drifted Brownian motion, never through the closed forms
under test.

  X_u = mu + beta*u + W_u,  tau = inf{u : X_u <= 0},
  g(u) = mu / sqrt(2 pi u^3) * exp(-(mu + beta u)^2 / (2u)).

Run: python3 singlename_oracle.py
"""
import mpmath as mp

mp.mp.dps = 30


def fpt_density(mu, beta):
    return lambda u: mu / mp.sqrt(2 * mp.pi * u**3) * mp.exp(-(mu + beta * u) ** 2 / (2 * u))


def default_prob(mu, sigma, nu, horizon):
    g = fpt_density(mu, nu / sigma)
    return mp.quad(g, [0, horizon])


def discounted_factor(mu, sigma, nu, r, horizon):
    g = fpt_density(mu, nu / sigma)
    return mp.quad(lambda u: mp.exp(-r * u) * g(u), [0, horizon])


def cds_value(mu, t, maturity, spread, rec, r, sigma, nu, notional):
    """Protection PV minus fee PV at time t, by definition, then discounted to 0."""
    horizon = maturity - t
    g = fpt_density(mu, nu / sigma)
    protection = mp.quad(lambda u: (1 - rec) * mp.exp(-r * u) * g(u), [0, horizon])
    survival = lambda u: 1 - mp.quad(g, [0, u]) if u > 0 else mp.mpf(1)
    fees = spread * mp.quad(lambda u: mp.exp(-r * u) * survival(u), [0, horizon])
    return mp.exp(-r * t) * notional * max(mp.mpf(0), protection - fees)


def gauss_exp_integral(a, b, c, y):
    # d/dx N((b - c x)/sqrt(x)) = phi(z) * (-b/2 x^{-3/2} - c/2 x^{-1/2})
    def integrand(x):
        z = (b - c * x) / mp.sqrt(x)
        dz = -b / (2 * x * mp.sqrt(x)) - c / (2 * mp.sqrt(x))
        return mp.exp(a * x) * mp.npdf(z) * dz
    return mp.quad(integrand, [0, y / 8, y])


print("P(tau<=3)  mu=1 sigma=.25 nu=.02        =", mp.nstr(default_prob(1, mp.mpf("0.25"), mp.mpf("0.02"), 3), 18))
print("E[e^-r tau] mu=.9 sigma=.3 nu=-.01 r=.04 D=4 =",
      mp.nstr(discounted_factor(mp.mpf("0.9"), mp.mpf("0.3"), mp.mpf("-0.01"), mp.mpf("0.04"), 4), 18))
print("gauss_exp_integral(-.02,-1.3,.1,2)      =",
      mp.nstr(gauss_exp_integral(mp.mpf("-0.02"), mp.mpf("-1.3"), mp.mpf("0.1"), 2), 18))
print("cds_value mu=.7 t=1 T=5 s=.012 ...      =",
      mp.nstr(cds_value(mp.mpf("0.7"), 1, 5, mp.mpf("0.012"), mp.mpf("0.4"), mp.mpf("0.03"),
                        mp.mpf("0.25"), mp.mpf("0.015"), 1), 18))
