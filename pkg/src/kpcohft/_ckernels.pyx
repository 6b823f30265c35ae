# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot loops. Same contract as ``_pykernels``."""

DEF E_OFF = 128


def conv_trunc(list a, list b, Py_ssize_t n, zero):
    cdef Py_ssize_t la = min(len(a), n + 1)
    cdef Py_ssize_t lb = min(len(b), n + 1)
    cdef Py_ssize_t i, j, top
    cdef list out = [zero] * (n + 1)
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


def sparse_mul(list a_terms, list b_terms, long wcap, long hcap, long sigma, long nmax):
    cdef dict out = {}
    cdef Py_ssize_t nb = len(b_terms), ia, ib
    cdef long long ka, kb, k
    cdef long wa, la, ea, wb, lb, eb, wroom, oroom
    cdef tuple ta, tb
    # unpack b once into C arrays of ints
    cdef long long[::1] kbs
    cdef long[::1] wbs, lbs, ebs
    import array
    kbs = array.array('q', [t[0] for t in b_terms]) if nb else array.array('q', [0])
    wbs = array.array('l', [t[1] for t in b_terms]) if nb else array.array('l', [0])
    lbs = array.array('l', [t[2] for t in b_terms]) if nb else array.array('l', [0])
    ebs = array.array('l', [t[3] for t in b_terms]) if nb else array.array('l', [0])
    cbs = [t[4] for t in b_terms]
    for ia in range(len(a_terms)):
        ta = a_terms[ia]
        ka = ta[0]; wa = ta[1]; la = ta[2]; ea = ta[3]
        ca = ta[4]
        wroom = wcap - wa
        oroom = hcap - ea - sigma * la
        for ib in range(nb):
            wb = wbs[ib]
            if wb > wroom:
                break
            lb = lbs[ib]
            if ebs[ib] + sigma * lb > oroom:
                continue
            if nmax >= 0 and la + lb > nmax:
                continue
            k = ka + kbs[ib] - E_OFF
            v = out.get(k)
            if v is None:
                out[k] = ca * cbs[ib]
            else:
                out[k] = v + ca * cbs[ib]
    return out
