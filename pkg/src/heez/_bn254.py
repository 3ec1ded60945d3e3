"""Arithmetic backend: the 254-bit Barreto-Naehrig curve with an optimal ate pairing.

Internal module.  Everything here works on bare tuples of gmpy2 integers so the
hot paths (Miller loop, scalar multiplication, multi-scalar sums) stay cheap;
the public wrappers live in ``heez.algebra``.

Representations:
  Fp    -- mpz
  Fp2   -- (c0, c1)            with u^2 = -1
  Fp6   -- (a0, a1, a2) of Fp2 with v^3 = xi = 9 + u
  Fp12  -- (b0, b1)     of Fp6 with w^2 = v
  G1    -- affine (x, y) of Fp, None for the identity
  G2    -- affine (x, y) of Fp2 on the sextic twist y^2 = x^3 + 3/xi, None identity
"""

from __future__ import annotations

from gmpy2 import mpz, invert, powmod

# Curve family parameter and derived moduli.
U = mpz(4965661367192848881)
P = 36 * U**4 + 36 * U**3 + 24 * U**2 + 6 * U + 1
R = 36 * U**4 + 36 * U**3 + 18 * U**2 + 6 * U + 1
ATE_LOOP = 6 * U + 2

B1 = mpz(3)  # G1: y^2 = x^3 + 3

G1_GEN = (mpz(1), mpz(2))

G2_GEN = (
    (
        mpz(10857046999023057135944570762232829481370756359578518086990519993285655852781),
        mpz(11559732032986387107991004021392285783925812861821192530917403151452391805634),
    ),
    (
        mpz(8495653923123431417604973247489272438418190587263600148770280649306958101930),
        mpz(4082367875863433681332203403145435568316851327593401208105741076214120093531),
    ),
)

# ---------------------------------------------------------------------------
# Fp2

FQ2_ONE = (mpz(1), mpz(0))
FQ2_ZERO = (mpz(0), mpz(0))
XI = (mpz(9), mpz(1))


def fq2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def fq2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def fq2_neg(a):
    return ((-a[0]) % P, (-a[1]) % P)


def fq2_conj(a):
    return (a[0], (-a[1]) % P)


def fq2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = a0 * b0
    t1 = a1 * b1
    # Karatsuba: a0*b1 + a1*b0 = (a0+a1)(b0+b1) - t0 - t1
    return ((t0 - t1) % P, ((a0 + a1) * (b0 + b1) - t0 - t1) % P)


def fq2_sqr(a):
    a0, a1 = a
    # (a0 + a1 u)^2 = (a0+a1)(a0-a1) + 2 a0 a1 u
    return (((a0 + a1) * (a0 - a1)) % P, (2 * a0 * a1) % P)


def fq2_muls(a, s):
    """Multiply by an Fp scalar."""
    return ((a[0] * s) % P, (a[1] * s) % P)


def fq2_mul_xi(a):
    """Multiply by xi = 9 + u."""
    a0, a1 = a
    return ((9 * a0 - a1) % P, (a0 + 9 * a1) % P)


def fq2_inv(a):
    a0, a1 = a
    norm = (a0 * a0 + a1 * a1) % P
    inv = invert(norm, P)
    return ((a0 * inv) % P, (-a1 * inv) % P)


def fq2_pow(a, e):
    result = FQ2_ONE
    base = a
    while e:
        if e & 1:
            result = fq2_mul(result, base)
        base = fq2_sqr(base)
        e >>= 1
    return result


def fq2_legendre(a):
    """1 if a is a nonzero square, -1 if non-square, 0 if zero."""
    a0, a1 = a
    norm = (a0 * a0 + a1 * a1) % P
    if norm == 0:
        return 0
    return 1 if powmod(norm, (P - 1) // 2, P) == 1 else -1


def fp_sqrt(a):
    """Square root in Fp (p = 3 mod 4), or None."""
    a = a % P
    if a == 0:
        return mpz(0)
    root = powmod(a, (P + 1) // 4, P)
    return root if (root * root) % P == a else None


def fq2_sqrt(a):
    """Square root in Fp2 via the norm map, or None if a is not a square."""
    a0, a1 = a
    if a1 == 0:
        root = fp_sqrt(a0)
        if root is not None:
            return (root, mpz(0))
        # a0 is a non-residue: sqrt is purely imaginary, (t*u)^2 = -t^2
        t = fp_sqrt((-a0) % P)
        return None if t is None else (mpz(0), t)
    norm = (a0 * a0 + a1 * a1) % P
    n = fp_sqrt(norm)
    if n is None:
        return None
    half = invert(2, P)
    x2 = ((a0 + n) * half) % P
    x = fp_sqrt(x2)
    if x is None:
        x2 = ((a0 - n) * half) % P
        x = fp_sqrt(x2)
        if x is None:
            return None
    y = (a1 * invert(2 * x, P)) % P
    return (x, y)


# ---------------------------------------------------------------------------
# Fp6 / Fp12

FQ6_ZERO = (FQ2_ZERO, FQ2_ZERO, FQ2_ZERO)
FQ6_ONE = (FQ2_ONE, FQ2_ZERO, FQ2_ZERO)


def fq6_add(a, b):
    return (fq2_add(a[0], b[0]), fq2_add(a[1], b[1]), fq2_add(a[2], b[2]))


def fq6_sub(a, b):
    return (fq2_sub(a[0], b[0]), fq2_sub(a[1], b[1]), fq2_sub(a[2], b[2]))


def fq6_neg(a):
    return (fq2_neg(a[0]), fq2_neg(a[1]), fq2_neg(a[2]))


def fq6_mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    t0 = fq2_mul(a0, b0)
    t1 = fq2_mul(a1, b1)
    t2 = fq2_mul(a2, b2)
    # Karatsuba cross terms
    c0 = fq2_add(t0, fq2_mul_xi(fq2_sub(fq2_mul(fq2_add(a1, a2), fq2_add(b1, b2)), fq2_add(t1, t2))))
    c1 = fq2_add(fq2_sub(fq2_mul(fq2_add(a0, a1), fq2_add(b0, b1)), fq2_add(t0, t1)), fq2_mul_xi(t2))
    c2 = fq2_add(fq2_sub(fq2_mul(fq2_add(a0, a2), fq2_add(b0, b2)), fq2_add(t0, t2)), t1)
    return (c0, c1, c2)


def fq6_sqr(a):
    return fq6_mul(a, a)


def fq6_mul_v(a):
    """Multiply by v: (a0, a1, a2) -> (xi*a2, a0, a1)."""
    return (fq2_mul_xi(a[2]), a[0], a[1])


def fq6_inv(a):
    a0, a1, a2 = a
    c0 = fq2_sub(fq2_sqr(a0), fq2_mul_xi(fq2_mul(a1, a2)))
    c1 = fq2_sub(fq2_mul_xi(fq2_sqr(a2)), fq2_mul(a0, a1))
    c2 = fq2_sub(fq2_sqr(a1), fq2_mul(a0, a2))
    t = fq2_add(fq2_mul_xi(fq2_add(fq2_mul(a2, c1), fq2_mul(a1, c2))), fq2_mul(a0, c0))
    t = fq2_inv(t)
    return (fq2_mul(c0, t), fq2_mul(c1, t), fq2_mul(c2, t))


FQ12_ONE = (FQ6_ONE, FQ6_ZERO)
FQ12_ZERO = (FQ6_ZERO, FQ6_ZERO)


def fq12_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = fq6_mul(a0, b0)
    t1 = fq6_mul(a1, b1)
    c1 = fq6_sub(fq6_mul(fq6_add(a0, a1), fq6_add(b0, b1)), fq6_add(t0, t1))
    return (fq6_add(t0, fq6_mul_v(t1)), c1)


def fq12_sqr(a):
    a0, a1 = a
    t = fq6_mul(a0, a1)
    c0 = fq6_sub(fq6_mul(fq6_add(a0, a1), fq6_add(a0, fq6_mul_v(a1))), fq6_add(t, fq6_mul_v(t)))
    return (c0, fq6_add(t, t))


def fq12_conj(a):
    return (a[0], fq6_neg(a[1]))


def fq12_inv(a):
    a0, a1 = a
    t = fq6_inv(fq6_sub(fq6_sqr(a0), fq6_mul_v(fq6_sqr(a1))))
    return (fq6_mul(a0, t), fq6_neg(fq6_mul(a1, t)))


def fq12_pow(a, e):
    if e < 0:
        a = fq12_inv(a)
        e = -e
    result = FQ12_ONE
    base = a
    while e:
        if e & 1:
            result = fq12_mul(result, base)
        base = fq12_sqr(base)
        e >>= 1
    return result


def fq12_eq(a, b):
    return a == b


def _fq12_to_coeffs(a):
    """Flatten to the w-power basis c0..c5 with f = sum c_i w^i."""
    (g0, g1, g2), (h0, h1, h2) = a
    return [g0, h0, g1, h1, g2, h2]


def _fq12_from_coeffs(c):
    return ((c[0], c[2], c[4]), (c[1], c[3], c[5]))


# Frobenius coefficients gamma1[i] = xi^(i*(p-1)/6), gamma2[i] = xi^(i*(p^2-1)/6)
GAMMA1 = [fq2_pow(XI, i * (P - 1) // 6) for i in range(6)]
GAMMA2 = [fq2_pow(XI, i * (P * P - 1) // 6) for i in range(6)]


def fq12_frob(a):
    """a^p."""
    c = _fq12_to_coeffs(a)
    return _fq12_from_coeffs([fq2_mul(fq2_conj(ci), GAMMA1[i]) for i, ci in enumerate(c)])


def fq12_frob_p2(a):
    """a^(p^2)."""
    c = _fq12_to_coeffs(a)
    return _fq12_from_coeffs([fq2_mul(ci, GAMMA2[i]) for i, ci in enumerate(c)])


# ---------------------------------------------------------------------------
# G1 (affine tuples over Fp, Jacobian internally)


def g1_is_on_curve(pt):
    if pt is None:
        return True
    x, y = pt
    return (y * y - (x * x * x + B1)) % P == 0


def g1_neg(pt):
    if pt is None:
        return None
    return (pt[0], (-pt[1]) % P)


def g1_eq(a, b):
    return a == b


def _jac_dbl(X, Y, Z):
    # dbl-2009-l, a = 0
    A = (X * X) % P
    B = (Y * Y) % P
    C = (B * B) % P
    D = (2 * ((X + B) * (X + B) - A - C)) % P
    E = (3 * A) % P
    F = (E * E) % P
    X3 = (F - 2 * D) % P
    Y3 = (E * (D - X3) - 8 * C) % P
    Z3 = (2 * Y * Z) % P
    return X3, Y3, Z3


def _jac_add_mixed(X1, Y1, Z1, x2, y2):
    # madd-2007-bl; (x2, y2) affine
    Z1Z1 = (Z1 * Z1) % P
    U2 = (x2 * Z1Z1) % P
    S2 = (y2 * Z1 * Z1Z1) % P
    H = (U2 - X1) % P
    r = (2 * (S2 - Y1)) % P
    if H == 0:
        if r == 0:
            return _jac_dbl(X1, Y1, Z1)
        return mpz(0), mpz(1), mpz(0)
    HH = (H * H) % P
    I = (4 * HH) % P
    J = (H * I) % P
    V = (X1 * I) % P
    X3 = (r * r - J - 2 * V) % P
    Y3 = (r * (V - X3) - 2 * Y1 * J) % P
    Z3 = ((Z1 + H) * (Z1 + H) - Z1Z1 - HH) % P
    return X3, Y3, Z3


def _jac_to_affine(X, Y, Z):
    if Z == 0:
        return None
    zi = invert(Z, P)
    zi2 = (zi * zi) % P
    return ((X * zi2) % P, (Y * zi2 * zi) % P)


def g1_add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    x1, y1 = a
    x2, y2 = b
    if x1 == x2:
        if (y1 + y2) % P == 0:
            return None
        num = (3 * x1 * x1) % P
        den = (2 * y1) % P
    else:
        num = (y2 - y1) % P
        den = (x2 - x1) % P
    lam = (num * invert(den, P)) % P
    x3 = (lam * lam - x1 - x2) % P
    y3 = (lam * (x1 - x3) - y1) % P
    return (x3, y3)


def g1_mul(pt, n):
    n = n % R
    if pt is None or n == 0:
        return None
    X, Y, Z = mpz(0), mpz(1), mpz(0)
    x2, y2 = pt
    seen = False
    for bit in bin(n)[2:]:
        if seen:
            X, Y, Z = _jac_dbl(X, Y, Z)
        if bit == "1":
            if seen:
                X, Y, Z = _jac_add_mixed(X, Y, Z, x2, y2)
            else:
                X, Y, Z = x2, y2, mpz(1)
                seen = True
    return _jac_to_affine(X, Y, Z)


def g1_msm(points, scalars):
    """Interleaved multi-scalar sum: sum scalars[i] * points[i]."""
    pairs = [(pt, s % R) for pt, s in zip(points, scalars) if pt is not None and s % R != 0]
    if not pairs:
        return None
    nbits = max(s.bit_length() for _, s in pairs)
    X, Y, Z = mpz(0), mpz(1), mpz(0)
    for i in range(nbits - 1, -1, -1):
        if Z != 0:
            X, Y, Z = _jac_dbl(X, Y, Z)
        mask = 1 << i
        for pt, s in pairs:
            if s & mask:
                if Z == 0:
                    X, Y, Z = mpz(pt[0]), mpz(pt[1]), mpz(1)
                else:
                    X, Y, Z = _jac_add_mixed(X, Y, Z, pt[0], pt[1])
    return _jac_to_affine(X, Y, Z)


class G1WindowTable:
    """Fixed-base table for repeated multiplications by the same point."""

    WINDOW = 4

    def __init__(self, base):
        self.base = base
        rows = []
        step = base
        for _ in range(0, 256, self.WINDOW):
            row = [None] * (1 << self.WINDOW)
            acc = None
            for j in range(1, 1 << self.WINDOW):
                acc = g1_add(acc, step)
                row[j] = acc
            rows.append(row)
            step = g1_add(acc, step)  # step * 2^WINDOW
        self.rows = rows

    def mul(self, n):
        n = int(n % R)
        acc_j = None
        i = 0
        while n:
            digit = n & 15
            if digit:
                pt = self.rows[i][digit]
                if acc_j is None:
                    acc_j = (mpz(pt[0]), mpz(pt[1]), mpz(1))
                else:
                    acc_j = _jac_add_mixed(*acc_j, pt[0], pt[1])
            n >>= 4
            i += 1
        if acc_j is None:
            return None
        return _jac_to_affine(*acc_j)


# ---------------------------------------------------------------------------
# G2 (affine tuples over Fp2 on the twist)

B2 = fq2_mul((mpz(3), mpz(0)), fq2_inv(XI))  # twist constant 3/xi


def g2_is_on_curve(pt):
    if pt is None:
        return True
    x, y = pt
    return fq2_sub(fq2_sqr(y), fq2_add(fq2_mul(fq2_sqr(x), x), B2)) == FQ2_ZERO


def g2_neg(pt):
    if pt is None:
        return None
    return (pt[0], fq2_neg(pt[1]))


def g2_add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    x1, y1 = a
    x2, y2 = b
    if x1 == x2:
        if fq2_add(y1, y2) == FQ2_ZERO:
            return None
        num = fq2_muls(fq2_sqr(x1), 3)
        den = fq2_muls(y1, 2)
    else:
        num = fq2_sub(y2, y1)
        den = fq2_sub(x2, x1)
    lam = fq2_mul(num, fq2_inv(den))
    x3 = fq2_sub(fq2_sqr(lam), fq2_add(x1, x2))
    y3 = fq2_sub(fq2_mul(lam, fq2_sub(x1, x3)), y1)
    return (x3, y3)


def _jac2_dbl(X, Y, Z):
    A = fq2_sqr(X)
    B = fq2_sqr(Y)
    C = fq2_sqr(B)
    D = fq2_muls(fq2_sub(fq2_sqr(fq2_add(X, B)), fq2_add(A, C)), 2)
    E = fq2_muls(A, 3)
    F = fq2_sqr(E)
    X3 = fq2_sub(F, fq2_muls(D, 2))
    Y3 = fq2_sub(fq2_mul(E, fq2_sub(D, X3)), fq2_muls(C, 8))
    Z3 = fq2_muls(fq2_mul(Y, Z), 2)
    return X3, Y3, Z3


def _jac2_add_mixed(X1, Y1, Z1, x2, y2):
    Z1Z1 = fq2_sqr(Z1)
    U2 = fq2_mul(x2, Z1Z1)
    S2 = fq2_mul(fq2_mul(y2, Z1), Z1Z1)
    H = fq2_sub(U2, X1)
    r = fq2_muls(fq2_sub(S2, Y1), 2)
    if H == FQ2_ZERO:
        if r == FQ2_ZERO:
            return _jac2_dbl(X1, Y1, Z1)
        return FQ2_ZERO, FQ2_ONE, FQ2_ZERO
    HH = fq2_sqr(H)
    I = fq2_muls(HH, 4)
    J = fq2_mul(H, I)
    V = fq2_mul(X1, I)
    X3 = fq2_sub(fq2_sub(fq2_sqr(r), J), fq2_muls(V, 2))
    Y3 = fq2_sub(fq2_mul(r, fq2_sub(V, X3)), fq2_muls(fq2_mul(Y1, J), 2))
    Z3 = fq2_sub(fq2_sub(fq2_sqr(fq2_add(Z1, H)), Z1Z1), HH)
    return X3, Y3, Z3


def g2_mul(pt, n):
    n = n % R
    if pt is None or n == 0:
        return None
    X, Y, Z = FQ2_ZERO, FQ2_ONE, FQ2_ZERO
    x2, y2 = pt
    seen = False
    for bit in bin(n)[2:]:
        if seen:
            X, Y, Z = _jac2_dbl(X, Y, Z)
        if bit == "1":
            if seen:
                X, Y, Z = _jac2_add_mixed(X, Y, Z, x2, y2)
            else:
                X, Y, Z = x2, y2, FQ2_ONE
                seen = True
    if Z == FQ2_ZERO:
        return None
    zi = fq2_inv(Z)
    zi2 = fq2_sqr(zi)
    return (fq2_mul(X, zi2), fq2_mul(fq2_mul(Y, zi2), zi))


def g2_in_subgroup(pt):
    return g2_is_on_curve(pt) and g2_mul(pt, R) is None


# ---------------------------------------------------------------------------
# Optimal ate pairing
#
# Lines are evaluated on the twist and mapped through the untwist
# (x, y) -> (x w^2, y w^3), so a line with twist-side slope lam' through
# (x', y') evaluated at P = (xP, yP) is
#     yP - lam' xP w + (lam' x' - y') w^3
# scaled per step by an Fp2 constant (killed by the final exponentiation).
# Nonzero w-basis slots: w^0, w^1, w^3.


def _line_dbl(T, xP, yP):
    """Doubling step: returns (line, 2T) with T projective (X, Y, Z) over Fp2."""
    X, Y, Z = T
    A = fq2_sqr(X)
    Bf = fq2_sqr(Y)
    C = fq2_sqr(Z)
    D = fq2_mul(X, A)          # X^3
    E = fq2_mul(Bf, Z)         # Y^2 Z
    # line scaled by 2YZ^2: (2YC)yP - (3AZ)xP w + (3D - 2E) w^3
    YC = fq2_mul(Y, C)
    AZ = fq2_mul(A, Z)
    l0 = fq2_muls(YC, 2 * yP)
    l1 = fq2_muls(AZ, (-3 * xP) % P)
    l3 = fq2_sub(fq2_muls(D, 3), fq2_muls(E, 2))
    nine_d = fq2_muls(D, 9)
    eight_e = fq2_muls(E, 8)
    XY = fq2_mul(X, Y)
    X3 = fq2_mul(fq2_mul(XY, Z), fq2_muls(fq2_sub(nine_d, eight_e), 2))
    Y3 = fq2_sub(
        fq2_mul(nine_d, fq2_sub(fq2_muls(E, 4), fq2_muls(D, 3))),
        fq2_muls(fq2_mul(fq2_sqr(Bf), C), 8),
    )
    Z3 = fq2_muls(fq2_mul(fq2_mul(Y, Bf), fq2_mul(Z, C)), 8)
    return (l0, l1, l3), (X3, Y3, Z3)


def _line_add(T, Q, xP, yP):
    """Addition step with affine Q = (x2, y2); returns (line, T + Q)."""
    X, Y, Z = T
    x2, y2 = Q
    theta = fq2_sub(fq2_mul(y2, Z), Y)
    lam = fq2_sub(fq2_mul(x2, Z), X)
    # line scaled by lam: lam*yP - theta*xP w + (theta x2 - lam y2) w^3
    l0 = fq2_muls(lam, yP)
    l1 = fq2_muls(theta, (-xP) % P)
    l3 = fq2_sub(fq2_mul(theta, x2), fq2_mul(lam, y2))
    A = fq2_sqr(lam)
    Bf = fq2_mul(lam, A)
    C = fq2_mul(Z, A)
    D = fq2_sqr(theta)
    E = fq2_mul(D, Z)
    G = fq2_mul(X, A)
    H = fq2_sub(fq2_sub(E, G), fq2_mul(x2, C))
    X3 = fq2_mul(lam, H)
    Z3 = fq2_mul(lam, C)
    Y3 = fq2_sub(fq2_mul(theta, fq2_sub(fq2_mul(x2, C), H)), fq2_mul(y2, fq2_mul(Bf, Z)))
    return (l0, l1, l3), (X3, Y3, Z3)


def _mul_by_line(f, line):
    """Multiply f by the sparse element l0 + l1 w + l3 w^3."""
    l0, l1, l3 = line
    a = ((l0, FQ2_ZERO, FQ2_ZERO), (l1, l3, FQ2_ZERO))
    return fq12_mul(f, a)


# Twisted Frobenius constants for the BN correction steps.
TWIST_FROB_X = fq2_pow(XI, (P - 1) // 3)
TWIST_FROB_Y = fq2_pow(XI, (P - 1) // 2)
TWIST_FROB_X2 = fq2_pow(XI, (P * P - 1) // 3)
TWIST_FROB_Y2 = fq2_pow(XI, (P * P - 1) // 2)


def _twist_frob(Q):
    x, y = Q
    return (fq2_mul(fq2_conj(x), TWIST_FROB_X), fq2_mul(fq2_conj(y), TWIST_FROB_Y))


def _twist_frob2(Q):
    x, y = Q
    return (fq2_mul(x, TWIST_FROB_X2), fq2_mul(y, TWIST_FROB_Y2))


def miller_loop(pt1, pt2):
    """Miller function for the optimal ate pairing, no final exponentiation.

    pt1 is a G1 point, pt2 a G2 twist point, both affine non-identity.
    """
    xP, yP = pt1
    T = (pt2[0], pt2[1], FQ2_ONE)
    f = FQ12_ONE
    for bit in bin(ATE_LOOP)[3:]:
        f = fq12_sqr(f)
        line, T = _line_dbl(T, xP, yP)
        f = _mul_by_line(f, line)
        if bit == "1":
            line, T = _line_add(T, pt2, xP, yP)
            f = _mul_by_line(f, line)
    q1 = _twist_frob(pt2)
    q2 = g2_neg(_twist_frob2(pt2))
    line, T = _line_add(T, q1, xP, yP)
    f = _mul_by_line(f, line)
    line, T = _line_add(T, q2, xP, yP)
    f = _mul_by_line(f, line)
    return f


def _exp_by_u(f):
    """f^U in the cyclotomic subgroup (U > 0)."""
    result = FQ12_ONE
    base = f
    e = int(U)
    while e:
        if e & 1:
            result = fq12_mul(result, base)
        base = fq12_sqr(base)
        e >>= 1
    return result


def final_exponentiation(f):
    """f^((p^12 - 1) / r) via the standard BN addition chain."""
    # easy part: f^((p^6 - 1)(p^2 + 1))
    t = fq12_mul(fq12_conj(f), fq12_inv(f))
    t = fq12_mul(fq12_frob_p2(t), t)
    # hard part (Beuchat et al. chain, u > 0); inverse = conjugate from here on
    fp = fq12_frob(t)
    fp2 = fq12_frob_p2(t)
    fp3 = fq12_frob(fp2)
    fu = _exp_by_u(t)
    fu2 = _exp_by_u(fu)
    fu3 = _exp_by_u(fu2)
    y0 = fq12_mul(fq12_mul(fp, fp2), fp3)
    y1 = fq12_conj(t)
    y2 = fq12_frob_p2(fu2)
    y3 = fq12_conj(fq12_frob(fu))
    y4 = fq12_conj(fq12_mul(fu, fq12_frob(fu2)))
    y5 = fq12_conj(fu2)
    y6 = fq12_conj(fq12_mul(fu3, fq12_frob(fu3)))
    t0 = fq12_mul(fq12_mul(fq12_sqr(y6), y4), y5)
    t1 = fq12_mul(fq12_mul(y3, y5), t0)
    t0 = fq12_mul(t0, y2)
    t1 = fq12_mul(fq12_sqr(t1), t0)
    t1 = fq12_sqr(t1)
    t0 = fq12_mul(t1, y1)
    t1 = fq12_mul(t1, y0)
    t0 = fq12_sqr(t0)
    return fq12_mul(t1, t0)


def pairing(pt1, pt2):
    """Full pairing e(pt1, pt2) as an Fp12 element."""
    if pt1 is None or pt2 is None:
        return FQ12_ONE
    return final_exponentiation(miller_loop(pt1, pt2))


def pairing_check(pairs):
    """True iff the product of pairings over (g1, g2) pairs equals one."""
    f = FQ12_ONE
    for pt1, pt2 in pairs:
        if pt1 is None or pt2 is None:
            continue
        f = fq12_mul(f, miller_loop(pt1, pt2))
    return final_exponentiation(f) == FQ12_ONE
