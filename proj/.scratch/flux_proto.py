"""Prototype the bulk flux fixed-point iteration: plain vs damped oracle.

Checks convergence over the acceptance grid (u in {2,5,10,15,20}, dT in
{-3,-1,0,1,3}, 3 RH levels) and the wider invariant grid (u in [0.5,25],
dT in [-5,5]), with and without a zeta clamp.
"""
import math

KAPPA = 0.4
G = 9.81
CP = 1004.67
RDRY = 287.05
NU = 1.5e-5
ZETA_MIN = -200.0
ZETA_MAX = 10.0


def psi_m(z):
    if z >= 0:
        return -5 * z
    x = (1 - 16 * z) ** 0.25
    return 2 * math.log((1 + x) / 2) + math.log((1 + x * x) / 2) - 2 * math.atan(x) + math.pi / 2


def psi_h(z):
    if z >= 0:
        return -5 * z
    y = math.sqrt(1 - 16 * z)
    return 2 * math.log((1 + y) / 2)


def qsat(t, p):
    es = 6.1121 * math.exp(17.502 * t / (240.97 + t))
    return 0.622 * es / (p - 0.378 * es)


def charnock(u10n):
    return max(0.0017 * u10n - 0.005, 0.001)


def solve(u, zu, ta, zt, ts, p, qa, tol=1e-4, itmax=50, clamp=True):
    ueff = max(u, 0.1)
    ustar = KAPPA * ueff / math.log(zu / 1e-4)
    u10n = ueff
    zeta = 0.0
    L_inv = 0.0
    tv = (ta + 273.15) * (1 + 0.61 * qa)
    qsea = 0.98 * qsat(ts, p)
    tstar = qstar = 0.0
    z0 = 1e-4
    it = 0
    converged = False
    for it in range(1, itmax + 1):
        alpha = charnock(u10n)
        z0 = alpha * ustar * ustar / G + 0.11 * NU / ustar
        rr = ustar * z0 / NU
        z0t = min(1.15e-4, 5.5e-5 * rr ** -0.6)
        zeta_u = zu * L_inv
        zeta_t = zt * L_inv
        if clamp:
            zeta_u = min(max(zeta_u, ZETA_MIN), ZETA_MAX)
            zeta_t = min(max(zeta_t, ZETA_MIN), ZETA_MAX)
        ustar_new = KAPPA * ueff / (math.log(zu / z0) - psi_m(zeta_u))
        tstar = KAPPA * (ta - ts) / (math.log(zt / z0t) - psi_h(zeta_t))
        qstar = KAPPA * (qa - qsea) / (math.log(zt / z0t) - psi_h(zeta_t))
        tvstar = tstar * (1 + 0.61 * qa) + 0.61 * (ta + 273.15) * qstar
        L_inv = KAPPA * G * tvstar / (ustar_new * ustar_new * tv)
        u10n = ustar_new / KAPPA * math.log(10 / z0)
        d = abs(ustar_new - ustar)
        ustar = ustar_new
        if d < tol:
            converged = True
            break
    rho = 100 * p / (RDRY * tv)
    tau = rho * ustar * ustar
    h = -rho * CP * ustar * tstar
    lv = (2.501 - 0.00237 * ts) * 1e6
    e = -rho * lv * ustar * qstar
    return dict(ustar=ustar, tau=tau, h=h, e=e, u10n=u10n, it=it, conv=converged,
                zeta=zu * L_inv, z0=z0)


def solve_damped(u, zu, ta, zt, ts, p, qa, iters=300, clamp=True):
    """Independent damped oracle: blend 0.5 old/new on ustar,tstar,qstar."""
    ueff = max(u, 0.1)
    ustar = KAPPA * ueff / math.log(zu / 1e-4)
    u10n = ueff
    L_inv = 0.0
    tv = (ta + 273.15) * (1 + 0.61 * qa)
    qsea = 0.98 * qsat(ts, p)
    tstar = qstar = 0.0
    z0 = 1e-4
    for it in range(iters):
        alpha = charnock(u10n)
        z0 = alpha * ustar * ustar / G + 0.11 * NU / ustar
        rr = ustar * z0 / NU
        z0t = min(1.15e-4, 5.5e-5 * rr ** -0.6)
        zeta_u = zu * L_inv
        zeta_t = zt * L_inv
        if clamp:
            zeta_u = min(max(zeta_u, ZETA_MIN), ZETA_MAX)
            zeta_t = min(max(zeta_t, ZETA_MIN), ZETA_MAX)
        un = KAPPA * ueff / (math.log(zu / z0) - psi_m(zeta_u))
        tn = KAPPA * (ta - ts) / (math.log(zt / z0t) - psi_h(zeta_t))
        qn = KAPPA * (qa - qsea) / (math.log(zt / z0t) - psi_h(zeta_t))
        ustar = 0.5 * ustar + 0.5 * un
        tstar = 0.5 * tstar + 0.5 * tn
        qstar = 0.5 * qstar + 0.5 * qn
        tvstar = tstar * (1 + 0.61 * qa) + 0.61 * (ta + 273.15) * qstar
        L_inv = KAPPA * G * tvstar / (ustar * ustar * tv)
        u10n = ustar / KAPPA * math.log(10 / z0)
    rho = 100 * p / (RDRY * tv)
    tau = rho * ustar * ustar
    h = -rho * CP * ustar * tstar
    lv = (2.501 - 0.00237 * ts) * 1e6
    e = -rho * lv * ustar * qstar
    return dict(ustar=ustar, tau=tau, h=h, e=e, u10n=u10n)


def relerr(a, b):
    m = max(abs(a), abs(b))
    if m < 1e-9:
        return 0.0
    return abs(a - b) / m


print("== acceptance grid: plain(tol 1e-4) vs damped(300) ==")
worst = (0, None)
nonconv = []
for u in (2, 5, 10, 15, 20):
    for dt in (-3, -1, 0, 1, 3):
        for rh in (0.4, 0.7, 0.95):
            ta, p = 15.0, 1013.0
            ts = ta + dt
            qa = rh * qsat(ta, p)
            a = solve(u, 10, ta, 10, ts, p, qa)
            b = solve_damped(u, 10, ta, 10, ts, p, qa)
            if not a["conv"]:
                nonconv.append((u, dt, rh, a["it"]))
            e = max(relerr(a["ustar"], b["ustar"]), relerr(a["tau"], b["tau"]),
                    relerr(a["h"], b["h"]), relerr(a["e"], b["e"]))
            if e > worst[0]:
                worst = (e, (u, dt, rh, a["it"], a["zeta"]))
print("worst rel err:", worst)
print("non-converged:", nonconv)

print("== tighter solver tol 1e-6 ==")
worst = (0, None)
for u in (2, 5, 10, 15, 20):
    for dt in (-3, -1, 0, 1, 3):
        for rh in (0.4, 0.7, 0.95):
            ta, p = 15.0, 1013.0
            ts = ta + dt
            qa = rh * qsat(ta, p)
            a = solve(u, 10, ta, 10, ts, p, qa, tol=1e-6)
            b = solve_damped(u, 10, ta, 10, ts, p, qa)
            e = max(relerr(a["ustar"], b["ustar"]), relerr(a["tau"], b["tau"]),
                    relerr(a["h"], b["h"]), relerr(a["e"], b["e"]))
            if e > worst[0]:
                worst = (e, (u, dt, rh, a["it"]))
print("worst rel err:", worst)

print("== invariant grid u in [0.5,25] dT in [-5,5], clamp on ==")
bad = []
maxit = 0
for iu in range(0, 50):
    u = 0.5 + iu * 0.5
    for idt in range(-10, 11):
        dt = idt * 0.5
        for rh in (0.4, 0.95):
            ta, p = 15.0, 1013.0
            ts = ta + dt
            qa = rh * qsat(ta, p)
            a = solve(u, 10, ta, 10, ts, p, qa)
            maxit = max(maxit, a["it"])
            if not a["conv"] or not all(math.isfinite(a[k]) for k in ("ustar", "tau", "h", "e")):
                bad.append((u, dt, rh, a["it"]))
print("max iterations:", maxit, " failures:", len(bad), bad[:8])

print("== invariant grid, clamp OFF (to show why clamp is needed) ==")
bad = []
for iu in range(0, 50):
    u = 0.5 + iu * 0.5
    for idt in range(-10, 11):
        dt = idt * 0.5
        for rh in (0.4, 0.95):
            ta, p = 15.0, 1013.0
            ts = ta + dt
            qa = rh * qsat(ta, p)
            a = solve(u, 10, ta, 10, ts, p, qa, clamp=False)
            if not a["conv"] or not all(math.isfinite(a[k]) for k in ("ustar", "tau", "h", "e")):
                bad.append((u, dt, rh, a["it"]))
print("failures:", len(bad), bad[:8])

print("== worked example row (u=10@4m, ta=18, ts=20, p=1013, q=0.010, zt=4) ==")
a = solve(10, 4, 18, 4, 20, 1013, 0.010, tol=1e-6)
b = solve_damped(10, 4, 18, 4, 20, 1013, 0.010)
print("plain :", {k: round(v, 6) if isinstance(v, float) else v for k, v in a.items()})
print("damped:", {k: round(v, 6) for k, v in b.items()})

print("== u=0 floor case ==")
a = solve(0, 10, 18, 10, 20, 1013, 0.010)
print(a)

print("== neutral: ts=ta=15, q=0.98qsat, u=8@10m, tol 1e-12 ==")
a = solve(8, 10, 15, 10, 15, 1013, 0.98 * qsat(15, 1013), tol=1e-12)
print(a)


def neutral_bisect(u, zu, p):
    """1-D bisection on g(ustar) = kappa*ueff/ln(zu/z0(ustar)) - ustar."""
    ueff = max(u, 0.1)

    def z0_of(ustar):
        z0 = 1e-4
        for _ in range(200):
            u10n = ustar / KAPPA * math.log(10 / z0)
            z0 = charnock(u10n) * ustar * ustar / G + 0.11 * NU / ustar
        return z0

    def g(ustar):
        return KAPPA * ueff / math.log(zu / z0_of(ustar)) - ustar

    lo, hi = 1e-6, 5.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(lo) * g(mid) <= 0:
            hi = mid
        else:
            lo = mid
    ustar = 0.5 * (lo + hi)
    z0 = z0_of(ustar)
    return ustar / KAPPA * math.log(10 / z0)


u10n_bis = neutral_bisect(8, 10, 1013)
print("bisection u10n:", u10n_bis, " solver u10n:", a["u10n"], " diff:", abs(u10n_bis - a["u10n"]))
