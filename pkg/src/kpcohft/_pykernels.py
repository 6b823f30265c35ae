"""Pure-Python hot loops. Mirrors ``_ckernels.pyx`` exactly."""

E_OFF = 128  # ħ-exponent offset inside packed monomial keys


def conv_trunc(a, b, n, zero):
    """Truncated Cauchy product of dense coefficient lists, indices 0..n."""
    la = min(len(a), n + 1)
    lb = min(len(b), n + 1)
    out = [zero] * (n + 1)
    for i in range(la):
        ai = a[i]
        if not ai:
            continue
        top = min(lb, n + 1 - i)
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


def sparse_mul(a_terms, b_terms, wcap, hcap, sigma, nmax):
    """Graded product of two flattened series.

    Terms are tuples ``(key, weight, length, hexp, coeff)``; ``b_terms`` must
    be sorted by weight.  A product term survives when its weight is at most
    ``wcap``, its order ``hexp + sigma*length`` is at most ``hcap`` and its
    length is at most ``nmax`` (negative ``nmax`` means unbounded).
    """
    out = {}
    get = out.get
    for ka, wa, la, ea, ca in a_terms:
        wroom = wcap - wa
        oroom = hcap - ea - sigma * la
        for kb, wb, lb, eb, cb in b_terms:
            if wb > wroom:
                break
            if eb + sigma * lb > oroom:
                continue
            if nmax >= 0 and la + lb > nmax:
                continue
            k = ka + kb - E_OFF
            v = get(k)
            if v is None:
                out[k] = ca * cb
            else:
                out[k] = v + ca * cb
    return out
