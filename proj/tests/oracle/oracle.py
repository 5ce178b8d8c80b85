#!/usr/bin/env python3
"""Independent numpy oracle for the fixture corpus.

Recomputes structural counts of every fixture with plain dense linear algebra
(row-major vec convention, full SVDs, no shared code with the C++ library) and
freezes them into frozen.json. The C++ tests assert against that file.

    python3 tests/oracle/oracle.py fixtures tests/oracle/frozen.json
"""

import json
import pathlib
import sys

import numpy as np

RANK_TOL = 1e-9
ZERO_RE = 1e-9


def load(path):
    data = json.loads(pathlib.Path(path).read_text())

    def mat(rows):
        return np.array([[complex(re, im) for re, im in row] for row in rows])

    return mat(data["H"]), [mat(m) for m in data.get("L", [])]


# Row-major vec: vec(A X B) = (A kron B^T) vec(X).
def left(a):
    return np.kron(a, np.eye(a.shape[0]))


def right(b):
    return np.kron(np.eye(b.shape[0]), b.T)


def heisenberg(h, ls):
    d = h.shape[0]
    out = 1j * (left(h) - right(h))
    for l in ls:
        ll = l.conj().T @ l
        out += left(l.conj().T) @ right(l) - 0.5 * (left(ll) + right(ll))
    return out


def predual(h, ls):
    out = -1j * (left(h) - right(h))
    for l in ls:
        ll = l.conj().T @ l
        out += left(l) @ right(l.conj().T) - 0.5 * (left(ll) + right(ll))
    return out


def null(a):
    if a.shape[0] == 0:
        return np.eye(a.shape[1])
    # V must be complete; U only matters for wide inputs.
    _, s, vh = np.linalg.svd(a, full_matrices=a.shape[0] < a.shape[1])
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > RANK_TOL * smax)) if smax > 0 else 0
    return vh[rank:].conj().T


def orth(cols):
    if cols.shape[1] == 0:
        return cols
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    rank = int(np.sum(s > RANK_TOL * s[0])) if s[0] > 0 else 0
    return u[:, :rank]


def commutant(mats, d):
    rows = [left(m) - right(m) for m in mats]
    if not rows:
        return np.eye(d * d)
    return null(np.vstack(rows))


def decoherence_free(h, ls):
    d = h.shape[0]
    span = []
    for l in ls:
        span += [l, l.conj().T]
    if not span:
        return np.eye(d * d)
    basis = orth(np.stack([m.reshape(-1) for m in span], axis=1))
    while True:
        comms = [(h @ b.reshape(d, d) - b.reshape(d, d) @ h).reshape(-1) for b in basis.T]
        grown = orth(np.hstack([basis, np.stack(comms, axis=1)]))
        if grown.shape[1] == basis.shape[1]:
            break
        basis = grown
    gens = [b.reshape(d, d) for b in basis.T]
    return commutant(gens + [g.conj().T for g in gens], d)


def block_shapes(nt, d, rng):
    mats = [c.reshape(d, d) for c in nt.T]
    # Center: coefficients c with [sum c_k b_k, b_j] = 0 for all j.
    rows = []
    for bj in mats:
        rows.append(np.stack([(bk @ bj - bj @ bk).reshape(-1) for bk in mats], axis=1))
    coeff = null(np.vstack(rows))
    center = [sum(c[k] * mats[k] for k in range(len(mats))) for c in coeff.T]
    herm = []
    for z in center:
        herm += [(z + z.conj().T) / 2, (z - z.conj().T) / 2j]
    x = sum(rng.uniform(-1, 1) * hm for hm in herm)
    vals, vecs = np.linalg.eigh(x)
    spread = max(vals[-1] - vals[0], 1.0)
    groups, start = [], 0
    for i in range(1, d + 1):
        if i == d or vals[i] - vals[i - 1] > 1e-6 * spread:
            groups.append(vecs[:, start:i])
            start = i
    shapes = []
    for w in groups:
        corner = orth(np.stack([(w.conj().T @ m @ w).reshape(-1) for m in mats], axis=1))
        k = int(round(np.sqrt(corner.shape[1])))
        shapes.append([k, w.shape[1] // k])
    return sorted(shapes, key=lambda s: (-s[0] * s[1], -s[0]))


def is_algebra(basis, d):
    if basis.shape[1] == 0:
        return True
    mats = [c.reshape(d, d) for c in basis.T]
    proj = basis @ basis.conj().T
    worst = 0.0
    for a in mats:
        for b in mats:
            v = (a @ b).reshape(-1)
            worst = max(worst, np.linalg.norm(v - proj @ v))
    return worst < 1e-8


def analyze(path, rng):
    h, ls = load(path)
    d = h.shape[0]
    lh = heisenberg(h, ls)
    lp = predual(h, ls)
    nt = decoherence_free(h, ls)
    ft = null(lh)
    kernel = null(lp)

    # Support of the invariant states: union of ranges of Hermitian kernel elements.
    herm = []
    for c in kernel.T:
        m = c.reshape(d, d)
        herm += [(m + m.conj().T) / 2, (m - m.conj().T) / 2j]
    support = orth(np.hstack([hm for hm in herm])) if herm else np.zeros((d, 0))
    eig = np.linalg.eigvals(lh)
    decaying = eig[eig.real < -ZERO_RE]
    return {
        "dim": d,
        "nt_dim": int(nt.shape[1]),
        "ft_dim": int(ft.shape[1]),
        "ft_is_algebra": bool(is_algebra(ft, d)),
        "kernel_dim": int(kernel.shape[1]),
        "p_R_rank": int(support.shape[1]),
        "faithful_exists": bool(support.shape[1] == d),
        "blocks": block_shapes(nt, d, rng),
        "decaying_modes": int(decaying.size),
        "max_decaying_real": float(decaying.real.max()) if decaying.size else None,
    }


def main():
    fixtures = pathlib.Path(sys.argv[1])
    out = pathlib.Path(sys.argv[2])
    rng = np.random.default_rng(0x5EED)
    frozen = {p.name: analyze(p, rng) for p in sorted(fixtures.glob("*.json"))}
    out.write_text(json.dumps(frozen, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
