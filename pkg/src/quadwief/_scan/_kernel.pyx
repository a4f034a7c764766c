# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled classification kernel for the census scan.

Handles odd rational primes p <= PMAX with small field/base data, doing
all residue arithmetic in C integers (128-bit intermediates).  Output
tuples must match quadwief._scan.pure.classify_prime exactly; the test
suite enforces the equivalence.
"""

ctypedef unsigned long long u64
ctypedef long long i64

cdef extern from *:
    ctypedef unsigned long long u128 "__uint128_t"
    ctypedef long long i128 "__int128_t"

# p**3 must stay below 2**62 so sums of three reduced products fit u64
PMAX = 1_500_000
COORD_MAX = 1 << 31

cdef u64[310] _SMALL_PRIMES
cdef int _N_SMALL = 0

cdef void _init_small() noexcept:
    global _N_SMALL
    cdef int limit = 2048
    cdef unsigned char[2048] sieve
    cdef int i, j
    for i in range(limit):
        sieve[i] = 1
    sieve[0] = sieve[1] = 0
    for i in range(2, 46):
        if sieve[i]:
            j = i * i
            while j < limit:
                sieve[j] = 0
                j += i
    for i in range(limit):
        if sieve[i]:
            _SMALL_PRIMES[_N_SMALL] = i
            _N_SMALL += 1

_init_small()


cdef inline u64 mulmod(u64 x, u64 y, u64 m) noexcept:
    return <u64>((<u128>x * y) % m)


cdef u64 powmod(u64 b, u64 e, u64 m) noexcept:
    cdef u64 r = 1 % m
    b %= m
    while e:
        if e & 1:
            r = mulmod(r, b, m)
        b = mulmod(b, b, m)
        e >>= 1
    return r


cdef u64 invmod(u64 a, u64 m) noexcept:
    # extended Euclid; gcd(a, m) must be 1
    cdef i128 t = 0, newt = 1, q, tmp
    cdef i128 r = <i128>m, newr = <i128>(a % m)
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += m
    return <u64>t


cdef u64 tonelli(u64 d, u64 p) noexcept:
    # square root of d mod odd prime p; (d/p) = +1 assumed
    cdef u64 q = p - 1, z = 2, m, c, t, r, b, t2
    cdef int s = 0, i
    d %= p
    if p % 4 == 3:
        return powmod(d, (p + 1) // 4, p)
    while q % 2 == 0:
        q //= 2
        s += 1
    while powmod(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m = s
    c = powmod(z, q, p)
    t = powmod(d, q, p)
    r = powmod(d, (q + 1) // 2, p)
    while t != 1:
        i = 1
        t2 = mulmod(t, t, p)
        while t2 != 1:
            t2 = mulmod(t2, t2, p)
            i += 1
        b = powmod(c, 1 << (m - i - 1), p)
        r = mulmod(r, b, p)
        c = mulmod(b, b, p)
        t = mulmod(t, c, p)
        m = i
    return r


cdef int _factor_distinct(u64 n, u64 *out) noexcept:
    # distinct prime factors of n <= PMAX + 1 via the small-prime table
    cdef int cnt = 0, i
    cdef u64 q
    for i in range(_N_SMALL):
        q = _SMALL_PRIMES[i]
        if q * q > n:
            break
        if n % q == 0:
            out[cnt] = q
            cnt += 1
            while n % q == 0:
                n //= q
    if n > 1:
        out[cnt] = n
        cnt += 1
    return cnt


cdef u64 _strip_order_scalar(u64 x, u64 group, u64 p, u64 *qs, int nq) noexcept:
    cdef u64 f = group
    cdef int i
    for i in range(nq):
        while f % qs[i] == 0 and powmod(x, f // qs[i], p) == 1:
            f //= qs[i]
    return f


# ---- inert pair arithmetic: omega^2 = c0 + c1*omega mod m ----

cdef inline void pair_mul(u64 u0, u64 u1, u64 v0, u64 v1, u64 m,
                          u64 c0, u64 c1, u64 *z0, u64 *z1) noexcept:
    cdef u64 t = mulmod(u1, v1, m)
    z0[0] = (mulmod(u0, v0, m) + mulmod(c0, t, m)) % m
    z1[0] = (mulmod(u0, v1, m) + mulmod(u1, v0, m) + mulmod(c1, t, m)) % m


cdef void pair_pow(u64 b0, u64 b1, u64 e, u64 m, u64 c0, u64 c1,
                   u64 *r0, u64 *r1) noexcept:
    cdef u64 a0 = 1 % m, a1 = 0
    while e:
        if e & 1:
            pair_mul(a0, a1, b0, b1, m, c0, c1, &a0, &a1)
        pair_mul(b0, b1, b0, b1, m, c0, c1, &b0, &b1)
        e >>= 1
    r0[0] = a0
    r1[0] = a1


cdef u64 _strip_order_pair(u64 x0, u64 x1, u64 group, u64 p,
                           u64 c0, u64 c1, u64 *qs, int nq) noexcept:
    cdef u64 f = group, r0, r1
    cdef int i
    for i in range(nq):
        while f % qs[i] == 0:
            pair_pow(x0, x1, f // qs[i], p, c0, c1, &r0, &r1)
            if r0 == 1 and r1 == 0:
                f //= qs[i]
            else:
                break
    return f


# ---- ramified pair arithmetic on the sqrt(d) view ----
# level 2: F_p[t]/(t^2); level 3: (a mod p^2, b mod p) with t^2 = d

cdef inline void ram_mul(u64 a1, u64 b1, u64 a2, u64 b2, u64 ma, u64 mb,
                         u64 dmod, u64 *za, u64 *zb) noexcept:
    za[0] = (mulmod(a1, a2, ma) + mulmod(dmod, mulmod(b1, b2, ma), ma)) % ma
    zb[0] = (mulmod(a1, b2, mb) + mulmod(b1, a2, mb)) % mb


cdef void ram_pow(u64 a, u64 b, u64 e, u64 ma, u64 mb, u64 dmod,
                  u64 *ra, u64 *rb) noexcept:
    cdef u64 x0 = 1 % ma, x1 = 0
    while e:
        if e & 1:
            ram_mul(x0, x1, a, b, ma, mb, dmod, &x0, &x1)
        ram_mul(a, b, a, b, ma, mb, dmod, &a, &b)
        e >>= 1
    ra[0] = x0
    rb[0] = x1


cdef u64 _lift_sqrt(u64 r, u64 dmod, u64 p, u64 target) noexcept:
    # Newton-lift r with r^2 = d mod p to r^2 = d mod target (p-power);
    # each step's modulus must stay <= mod^2 for quadratic convergence
    cdef u64 mod = p, nxt
    while mod < target:
        if mod > target // mod:
            nxt = target
        else:
            nxt = mod * mod
        r = r % nxt
        r = (r + nxt - mulmod(mulmod(r, r, nxt) + nxt - dmod % nxt,
                              invmod(2 * r % nxt, nxt), nxt)) % nxt
        mod = nxt
    return r


def classify_batch(object d_obj, int delta, object a_obj, object b_obj,
                   ps, bint with_orders, object norm_limit=None):
    """Classify all prime ideals above the odd primes in ps.

    d, a, b must satisfy |.| < 2**31 and every p must be odd and at
    most PMAX; the caller (quadwief._scan) checks this.  Ideals of norm
    beyond norm_limit are pruned.
    """
    cdef i64 d = d_obj, a = a_obj, b = b_obj
    cdef u64 nlimit = 0 if norm_limit is None else norm_limit
    cdef list out = []
    cdef u64 p
    for p_obj in ps:
        p = p_obj
        _classify_one(d, delta, a, b, p, with_orders, nlimit, out)
    return out


cdef void _classify_one(i64 d, int delta, i64 a, i64 b, u64 p,
                        bint with_orders, u64 nlimit, list out):
    cdef u64 p2 = p * p, p3 = p * p * p
    cdef u64 dm = <u64>(((d % <i64>p3) + <i64>p3) % <i64>p3)
    cdef u64 am = <u64>(((a % <i64>p3) + <i64>p3) % <i64>p3)
    cdef u64 bm = <u64>(((b % <i64>p3) + <i64>p3) % <i64>p3)
    cdef u64 eul
    if dm % p == 0:
        _ramified(d, delta, p, p2, p3, dm, am, bm, with_orders, out)
        return
    eul = powmod(dm % p, (p - 1) // 2, p)
    if eul == 1:
        _split(delta, p, p2, p3, dm, am, bm, with_orders, out)
    else:
        if nlimit and p * p > nlimit:
            return
        _inert(d, delta, p, p2, p3, dm, am, bm, with_orders, out)


cdef void _split(int delta, u64 p, u64 p2, u64 p3, u64 dm, u64 am, u64 bm,
                 bint with_orders, list out):
    cdef u64 r = tonelli(dm % p, p)
    cdef u64 r3, rt, w3, x3, x1, x2, f
    cdef u64[16] qs
    cdef int nq = 0, conj, delta_val
    cdef str cls
    cdef object fv, dv
    if p - r < r:
        r = p - r
    r3 = _lift_sqrt(r, dm, p, p3)
    if with_orders:
        nq = _factor_distinct(p - 1, qs)
    for conj in range(2):
        rt = r3 if conj == 0 else p3 - r3
        if delta == 1:
            w3 = mulmod((1 + rt) % p3, invmod(2, p3), p3)
        else:
            w3 = rt
        x3 = (am + mulmod(bm, w3, p3)) % p3
        x1 = x3 % p
        if x1 == 0:
            out.append((p, conj, "SPLIT", p, "NON_WIEFERICH", None, None,
                        ("BASE_IN_IDEAL",)))
            continue
        x2 = x3 % p2
        if powmod(x2, p - 1, p2) != 1:
            cls = "NON_WIEFERICH"
        elif powmod(x3, p - 1, p3) == 1:
            cls = "SUPER_WIEFERICH"
        else:
            cls = "WIEFERICH"
        fv = dv = None
        if with_orders:
            f = _strip_order_scalar(x1, p - 1, p, qs, nq)
            if powmod(x2, f, p2) != 1:
                delta_val = 1
            elif powmod(x3, f, p3) != 1:
                delta_val = 2
            else:
                delta_val = 3
            fv = f
            dv = delta_val
        out.append((p, conj, "SPLIT", p, cls, fv, dv, ()))


cdef void _inert(i64 d, int delta, u64 p, u64 p2, u64 p3, u64 dm,
                 u64 am, u64 bm, bint with_orders, list out):
    cdef u64 c0_3, c1, e, f
    cdef u64 a1 = am % p, b1 = bm % p
    cdef u64 r0, r1, s0, s1
    cdef u64[32] qs
    cdef int nq = 0, nq2, i, delta_val
    cdef str cls
    cdef object fv, dv
    if delta == 1:
        c0_3 = <u64>((((d - 1) / 4) % <i64>p3 + <i64>p3) % <i64>p3)
        c1 = 1
    else:
        c0_3 = dm
        c1 = 0
    if a1 == 0 and b1 == 0:
        out.append((p, 0, "INERT", p * p, "NON_WIEFERICH", None, None,
                    ("BASE_IN_IDEAL",)))
        return
    e = p * p - 1
    pair_pow(am % p2, bm % p2, e, p2, c0_3 % p2, c1, &r0, &r1)
    if not (r0 == 1 and r1 == 0):
        cls = "NON_WIEFERICH"
    else:
        pair_pow(am, bm, e, p3, c0_3, c1, &s0, &s1)
        cls = "SUPER_WIEFERICH" if (s0 == 1 and s1 == 0) else "WIEFERICH"
    fv = dv = None
    if with_orders:
        nq = _factor_distinct(p - 1, qs)
        nq2 = _factor_distinct(p + 1, qs + nq)
        # 2 appears in both lists; a repeated visit strips nothing more,
        # so the duplicate is harmless
        f = _strip_order_pair(a1, b1, e, p, c0_3 % p, c1, qs, nq + nq2)
        pair_pow(am % p2, bm % p2, f, p2, c0_3 % p2, c1, &r0, &r1)
        if not (r0 == 1 and r1 == 0):
            delta_val = 1
        else:
            pair_pow(am, bm, f, p3, c0_3, c1, &s0, &s1)
            delta_val = 2 if not (s0 == 1 and s1 == 0) else 3
        fv = f
        dv = delta_val
    out.append((p, 0, "INERT", p * p, cls, fv, dv, ()))


cdef void _ramified(i64 d, int delta, u64 p, u64 p2, u64 p3, u64 dm,
                    u64 am, u64 bm, bint with_orders, list out):
    cdef u64 xa2, xb1, xa1, inv2
    cdef u64 ra, rb, f
    cdef u64[16] qs
    cdef int nq, delta_val
    cdef str cls
    cdef object fv, dv
    # sqrt(d) coordinates mod p^2 / p
    if delta == 1:
        inv2 = invmod(2, p2)
        xa2 = mulmod((2 * am + bm) % p2, inv2, p2)
        xb1 = mulmod(bm % p, invmod(2, p), p)
    else:
        xa2 = am % p2
        xb1 = bm % p
    xa1 = xa2 % p
    if xa1 == 0:
        out.append((p, 0, "RAMIFIED", p, "NON_WIEFERICH", None, None,
                    ("BASE_IN_IDEAL",)))
        return
    # level 2: F_p[t]/(t^2)
    ram_pow(xa1, xb1, p - 1, p, p, 0, &ra, &rb)
    if not (ra == 1 and rb == 0):
        cls = "NON_WIEFERICH"
    else:
        ram_pow(xa2, xb1, p - 1, p2, p, dm % p2, &ra, &rb)
        cls = "SUPER_WIEFERICH" if (ra == 1 and rb == 0) else "WIEFERICH"
    fv = dv = None
    if with_orders:
        nq = _factor_distinct(p - 1, qs)
        f = _strip_order_scalar(xa1, p - 1, p, qs, nq)
        ram_pow(xa1, xb1, f, p, p, 0, &ra, &rb)
        if not (ra == 1 and rb == 0):
            delta_val = 1
        else:
            ram_pow(xa2, xb1, f, p2, p, dm % p2, &ra, &rb)
            delta_val = 2 if not (ra == 1 and rb == 0) else 3
        fv = f
        dv = delta_val
    out.append((p, 0, "RAMIFIED", p, cls, fv, dv, ()))
