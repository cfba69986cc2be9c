#!/usr/bin/env python3
"""Independent arbitrary-precision evaluation of the bound constants.

Prints a C++ header with the frozen values (12 significant digits are
checked by the tests; 17 are emitted). Run once; output is committed as
tests/golden_values.hpp.
"""
import mpmath as mp

mp.mp.dps = 40


def Phi(x):
    return mp.ncdf(x)


def sup_t2_phi():
    # stationary point of t^2 Phi(-t): 2 Phi(-t) = t phi(t)
    f = lambda t: 2 * Phi(-t) - t * mp.npdf(t)
    t = mp.findroot(f, 1.2)
    return t, t * t * Phi(-t)


T_STAR, SUP = sup_t2_phi()


def zeta(L, sigma, gbar):
    return 2 * (1 + gbar * L) ** 2 * sigma**2 / (2 * mp.sqrt(2 * mp.pi)) * (SUP + mp.mpf(1) / 8)


def eta_R(L, m, R1, cinf, sigma, gbar, dbar, R):
    s = dbar + gbar
    z = zeta(L, sigma, gbar)
    num = mp.sqrt(s) * (2 * z * mp.e ** (3 * s * L) / sigma**3 + mp.e ** (s * L) / (2 * mp.sqrt(2 * mp.pi) * sigma))
    den = Phi(-((1 + gbar * L) * R + s * cinf) / (2 * mp.sqrt(dbar) * sigma * mp.e ** (-s * L)))
    return num / den


def thm11(L, m, R1, cinf, sigma, gbar, dbar):
    s = dbar + gbar
    z = zeta(L, sigma, gbar)
    eta1 = eta_R(L, m, R1, cinf, sigma, gbar, dbar, R1)
    c1 = eta1 * R1 * (1 + L / m) + 1 / m
    c2 = mp.e ** (s * L) * (c1 * (1 + gbar * L) / mp.sqrt(dbar) + mp.sqrt(s)) / (mp.sqrt(2 * mp.pi) * sigma) \
        + 2 * z * mp.sqrt(s) * mp.e ** (3 * s * L) / sigma**3
    return dict(zeta=z, eta1=eta1, c1=c1, c2=c2)


def thm12(a, L, m, R1, cinf, sigma, gbar, dbar):
    Rt = max(mp.mpf(1), R1, (4 * a * sigma**2 + 2 * cinf) / m, 16 * sigma**2 * a / m)
    lam = mp.exp(-a * m * Rt / 8)
    gauss_term = 2 * sigma**2 / mp.sqrt(2 * mp.pi) * a * mp.exp((a + 2 * sigma * mp.sqrt(gbar) * a) ** 2 / 2)
    Ca = a * (cinf + 2 * a * sigma**2) * mp.exp(a * gbar * (cinf + 2 * a * sigma**2)) + gauss_term
    Ra = max(Rt, mp.log(1 + Ca / (-mp.log(lam) * lam ** (2 * gbar))) / a)
    g1 = min(gbar, 1 / (-mp.log(lam)), 1 / (4 * sigma**2))
    k = cinf + 2 * a * sigma**2 + L * Ra
    Ba = mp.exp(a * k)
    Wstar = mp.exp(a * Ra) - 1
    Da = a * k * mp.exp(a * gbar * k) + gauss_term + 2 * sigma**2 * a**2 * lam ** (2 * gbar) * Wstar
    Aa = 4 * mp.exp(a * gbar * (cinf + 2 * a * sigma**2)) * (gbar * (2 * a * sigma**2 + cinf / 2) ** 2 + sigma**2) / (2 * sigma**2)
    alpha = mp.log(Ba / lam) * mp.exp(a * Ra) * Ba**gbar - mp.log(lam) + Da
    etaRa = eta_R(L, m, R1, cinf, sigma, gbar, dbar, Ra)
    c3 = (Ba / lam) ** gbar * a * (L * Ra + 2 * sigma**2 * a + cinf + m * Rt / 8) * etaRa * Wstar / abs(mp.log(lam)) \
        + (Da * etaRa + Aa) / abs(mp.log(lam))
    return dict(R_tilde=Rt, lambda_a=lam, C_a=Ca, R_a=Ra, gamma_bar_1=g1, B_a=Ba, D_a=Da, A_a=Aa,
                alpha_a=alpha, eta_Ra=etaRa, c3=c3)


def doeblin_eps(L, sigma, gbar, t0, cinf, M):
    # lemma bound at K = ceil(t0/gamma) steps, made uniform in gamma <= gbar:
    # tau(M) <= (1 + gbar L) M, alpha_K <= K gamma cinf <= (t0 + gbar) cinf, and a lower bound on beta_K^2
    tau_max = (1 + gbar * L) * M
    alpha_max = (t0 + gbar) * cinf
    if L == 0:
        beta2_min = sigma**2 * t0
    else:
        beta2_min = sigma**2 * (1 - mp.exp(-2 * L * t0 / (1 + gbar * L))) / (L * (2 + gbar * L))
    for g in (gbar, gbar / 3, gbar / 10):
        K = int(mp.ceil(t0 / g))
        q = 1 / (1 + g * L)
        beta2 = g * sigma**2 * sum(q ** (2 * i) for i in range(K))
        assert beta2 >= beta2_min, (beta2, beta2_min)
    return 2 * Phi(-(tau_max + alpha_max) / (2 * mp.sqrt(beta2_min)))


def thm13(L, m, R1, cinf, sigma, gbar, t0, lam, beta, V_inv):
    delta = 4 * beta / (1 - lam) - 1
    M = V_inv(delta)
    eps = doeblin_eps(L, sigma, gbar, t0, cinf, M)
    lbar = lam**t0 + 2 * beta / (1 + delta)
    bbar = lam**t0 * beta + delta
    lr = mp.log1p(-eps) * mp.log(lbar) / (mp.log1p(-eps) + mp.log(lbar) - mp.log(bbar)) / (t0 + gbar)
    rho = mp.exp(lr)
    # product form of the cited ergodicity theorem (see ledger)
    Ct = (lam**t0 + beta) * (1 + bbar / ((1 - eps) * (1 - lbar))) / rho
    return dict(log_rho=lr, rho=rho, C_tilde=Ct, epsilon=eps, delta=delta, M=M, lambda_bar=lbar, beta_bar=bbar,
                lam=lam, beta=beta)


def appendixA(Tinf, L, m, R1, sigma, gbar, d):
    c = m / (32 * sigma**2)
    M = max(R1, mp.sqrt(16 * d * sigma**2 / m), (4 * Tinf + 2 * gbar * Tinf**2) / m)
    lam = mp.exp(-m * M**2 / 8)
    C2 = max(2 * L + L**2 * gbar, 8 * c * sigma**2)
    C1 = max(C2, C2**2 * gbar)
    B1 = 4 * C1 + 2 * (1 + 8 * c * sigma**2 * gbar) * (1 + gbar * L) * Tinf
    B2 = 2 * d * c * sigma**2 + 2 * (1 + 8 * c * sigma**2 * gbar) * (1 + gbar * L) * Tinf \
        + c * (1 + 8 * c * sigma**2 * gbar) * gbar * Tinf**2
    inner = c * B1 * M**2 + B2 - mp.log(lam)
    A = mp.exp(c * M**2 + gbar * inner) * inner
    return dict(c=c, M=M, lam=lam, C1=C1, C2=C2, B1=B1, B2=B2, A=A)


def tv_R(L, sigma, gbar, t0, dist0):
    return 1 - 2 * Phi(-dist0 / (2 * sigma**2 * t0 * mp.exp(-2 * (t0 + gbar) * L)))


def alpha_beta(gamma, cinf, sigma, L, k):
    q = 1 / (1 + gamma * L)
    alpha = gamma * cinf * mp.fsum(q**i for i in range(k))
    beta = mp.sqrt(gamma * sigma**2 * mp.fsum(q ** (2 * i) for i in range(k)))
    return alpha, beta


def tau(L, m, R1, gamma, r):
    if r <= R1:
        return (1 + L * gamma) * r
    return (1 + L * gamma) * R1 + (1 - m * gamma) * (r - R1)


def exp_moment_closed(L, m, R1, cinf, sigma, gamma, a, w):
    s = tau(L, m, R1, gamma, w) + gamma * cinf
    sg = sigma * mp.sqrt(gamma)
    t = s / (2 * sg)
    return mp.exp(2 * a**2 * sigma**2 * gamma) * (
        mp.exp(a * s) * (Phi(t + 2 * sg * a) - Phi(-t + 2 * sg * a))
        + 2 * mp.sinh(a * s) * Phi(-t + 2 * sg * a)) - 1 + 2 * Phi(-t)


def exp_moment_quad(L, m, R1, cinf, sigma, gamma, a, w):
    # direct integration of the kernel: non-merge branch weighted by 1 - pbar
    s = tau(L, m, R1, gamma, w) + gamma * cinf
    v = sigma**2 * gamma
    sv = mp.sqrt(v)

    def integrand(g):
        p = min(mp.mpf(1), mp.exp(s * (2 * sv * g - s) / (2 * v)))
        return (mp.exp(a * (s - 2 * sv * g)) - 1) * (1 - p) * mp.npdf(g)

    return mp.quad(integrand, [-mp.inf, s / (2 * sv), mp.inf])


def main():
    out = []

    def emit(name, val):
        out.append(f"inline constexpr double {name} = {mp.nstr(val, 17, strip_zeros=False)};")

    emit("kSupT2Phi", SUP)
    emit("kArgSupT2Phi", T_STAR)

    # set A: L=1, m=0.5, R1=1, cinf=0.1, sigma=1, gbar=0.1, dbar=0.5
    A = dict(L=mp.mpf(1), m=mp.mpf("0.5"), R1=mp.mpf(1), cinf=mp.mpf("0.1"), sigma=mp.mpf(1), gbar=mp.mpf("0.1"))
    dA = mp.mpf("0.5")
    r = thm11(**A, dbar=dA)
    for k in ("zeta", "eta1", "c1", "c2"):
        emit(f"kA_{k}", r[k])
    emit("kA_eta_R2", eta_R(**A, dbar=dA, R=mp.mpf(2)))
    emit("kA_zeta_L0", zeta(mp.mpf(0), mp.mpf(1), mp.mpf("0.1")))

    lam1 = mp.exp(-A["m"])
    beta1 = (A["R1"] * (A["m"] + A["L"]) + A["cinf"] + A["m"]) / A["m"]
    t13 = thm13(A["L"], A["m"], A["R1"], A["cinf"], A["sigma"], A["gbar"], mp.mpf(1), lam1, beta1, lambda d: d - 1)
    for k in ("log_rho", "C_tilde", "epsilon", "delta", "M", "lam", "beta"):
        emit(f"kA_t13_{k}", t13[k])

    # set B: a=0.5, L=0.1, m=0.5, R1=1, cinf=0.1, sigma=1, gbar=0.1, dbar=1
    B = dict(L=mp.mpf("0.1"), m=mp.mpf("0.5"), R1=mp.mpf(1), cinf=mp.mpf("0.1"), sigma=mp.mpf(1), gbar=mp.mpf("0.1"))
    a = mp.mpf("0.5")
    dB = mp.mpf(1)
    r12 = thm12(a, **B, dbar=dB)
    for k in ("R_tilde", "lambda_a", "C_a", "R_a", "gamma_bar_1", "B_a", "D_a", "A_a", "alpha_a", "eta_Ra", "c3"):
        emit(f"kB_{k}", r12[k])
    t0 = mp.mpf(1)
    beta_a = (t0 + B["gbar"]) * r12["alpha_a"] * r12["lambda_a"] ** (-B["gbar"])
    t13e = thm13(B["L"], B["m"], B["R1"], B["cinf"], B["sigma"], B["gbar"], t0, r12["lambda_a"], beta_a,
                 lambda d: mp.log(d) / a)
    for k in ("log_rho", "C_tilde", "epsilon", "delta", "M", "beta"):
        emit(f"kB_t13_{k}", t13e[k])
    r11B = thm11(**B, dbar=dB)
    emit("kB_c1", r11B["c1"])

    # theorem-4 assemblies
    # linear cost on set A, t0=1: C = C_tilde (1 + mu(V)), mu(V) <= 1 + cinf c1, c = c1
    g, k, d0 = mp.mpf("0.05"), 100, mp.mpf(2)
    C = t13["C_tilde"] * (2 + A["cinf"] * r["c1"])
    emit("kA_t4_linear", C * t13["rho"] ** (g * k) * (1 + d0) + r["c1"] * A["cinf"])
    emit("kA_t4_indicator", C * t13["rho"] ** (g * k) * (1 + d0) + r["c2"] * A["cinf"])
    Ce = t13e["C_tilde"] * (2 + B["cinf"] * r12["c3"])
    emit("kB_t4_exponential", Ce * t13e["rho"] ** (g * k) * mp.exp(a * d0) + r12["c3"] * B["cinf"])

    # appendix A: Tinf=0.5, L=1, m=0.5, R1=1, sigma=1, gbar=0.1, d=2
    ap = appendixA(mp.mpf("0.5"), mp.mpf(1), mp.mpf("0.5"), mp.mpf(1), mp.mpf(1), mp.mpf("0.1"), 2)
    for k in ("c", "M", "lam", "C1", "C2", "B1", "B2", "A"):
        emit(f"kApp_{k}", ap[k])
    emit("kTvR", tv_R(mp.mpf(1), mp.mpf(1), mp.mpf("0.1"), mp.mpf(1), mp.mpf("0.7")))

    al, be = alpha_beta(mp.mpf("0.01"), mp.mpf("0.2"), mp.mpf("1.3"), mp.mpf("0.5"), 7)
    emit("kAlpha7", al)
    emit("kBeta7", be)
    al, be = alpha_beta(mp.mpf("0.01"), mp.mpf("0.2"), mp.mpf("1.3"), mp.mpf("0.5"), 1000)
    emit("kAlpha1000", al)
    emit("kBeta1000", be)

    # one-step exponential moment: closed form vs direct quadrature
    args = (mp.mpf("0.1"), mp.mpf("0.5"), mp.mpf(1), mp.mpf("0.2"), mp.mpf(1), mp.mpf("0.1"), mp.mpf("0.5"), mp.mpf(1))
    cf = exp_moment_closed(*args)
    qd = exp_moment_quad(*args)
    assert abs(cf - qd) < mp.mpf("1e-25") * abs(qd), (cf, qd)
    emit("kExpMoment", qd)
    emit("kMassZero", 2 * Phi(-mp.mpf("0.05")))

    print("#pragma once")
    print()
    print("// generated by tests/oracles/golden.py")
    print("namespace golden {")
    for line in out:
        print(line)
    print("}  // namespace golden")


if __name__ == "__main__":
    main()
