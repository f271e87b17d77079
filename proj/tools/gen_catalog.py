#!/usr/bin/env python3
"""Generates include/sap/catalog_data.hpp with the built-in code catalog.

Constructions (all verified before emission):
  HAMMING_7_4   columns of H are the binary expansions of 1..7.
  BCH_15_7      cyclic code with g(x) = x^8+x^7+x^6+x^4+1; H rows are the
                shifts of the reciprocal parity polynomial. Checked by
                enumerating all 128 codewords m(x)g(x) against H.
  LDPC_n_k      (3,6)-regular: three rounds, each a fresh permutation of the
                variables split into consecutive pairs, one pair per check
                and round. Unlike band constructions this leaves no forced
                row dependencies; seeds are searched until H has full rank
                and no duplicate edges.
  LDPC_n_k_X2   graph 2-lift of the base LDPC: each base edge is either kept
                parallel (block diagonal) or crossed (off diagonal). Keeps
                (3,6) regularity, doubles n and m, and is provably full rank
                whenever the base is.
  DENSE_m2_m    Bernoulli(1/2) fill, full rank, no empty row or column. These
                are deliberately far from the sparse codes in spectral terms.

Run from the repo root:  python3 tools/gen_catalog.py
Deterministic: all randomness comes from the fixed seeds below.
"""

import random
from pathlib import Path

CATALOG_VERSION = 1
LDPC_SEED = 20240801
LIFT_SEED = 20240802
DENSE_SEED = 20240803


def gf2_rank(rows, ncols):
    rows = list(rows)
    rank = 0
    for col in range(ncols):
        mask = 1 << col
        pivot = next((i for i in range(rank, len(rows)) if rows[i] & mask), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & mask:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def col_degrees(rows, ncols):
    return [sum(r >> c & 1 for r in rows) for c in range(ncols)]


def hamming_7_4():
    rows = [0, 0, 0]
    for c in range(7):
        v = c + 1
        for r in range(3):
            if v >> r & 1:
                rows[r] |= 1 << c
    return rows, 7


def poly_divmod_gf2(num, den):
    q = 0
    dn = den.bit_length() - 1
    while num.bit_length() - 1 >= dn and num:
        shift = num.bit_length() - 1 - dn
        q |= 1 << shift
        num ^= den << shift
    return q, num


def poly_mul_gf2(a, b):
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def bch_15_7():
    n, k = 15, 7
    g = (1 << 8) | (1 << 7) | (1 << 6) | (1 << 4) | 1
    h, rem = poly_divmod_gf2((1 << n) | 1, g)
    assert rem == 0 and poly_mul_gf2(g, h) == (1 << n) | 1
    deg_h = h.bit_length() - 1
    assert deg_h == k
    # reciprocal polynomial of h: coefficient j becomes coefficient deg-j
    hrev = 0
    for j in range(deg_h + 1):
        if h >> j & 1:
            hrev |= 1 << (deg_h - j)
    rows = [hrev << i for i in range(n - k)]
    # every codeword m(x)g(x) must be annihilated by every row
    for m in range(1 << k):
        c = poly_mul_gf2(m, g)
        for r in rows:
            assert bin(r & c).count("1") % 2 == 0, "BCH parity check failed"
    assert gf2_rank(rows, n) == n - k
    return rows, n


def ldpc_36(n, rng):
    m = n // 2
    for _ in range(10000):
        rows = [0] * m
        ok = True
        for _round in range(3):
            perm = list(range(n))
            rng.shuffle(perm)
            for j in range(m):
                a, b = perm[2 * j], perm[2 * j + 1]
                pair = (1 << a) | (1 << b)
                if rows[j] & pair:
                    ok = False
                    break
                rows[j] |= pair
            if not ok:
                break
        if not ok or gf2_rank(rows, n) != m:
            continue
        assert all(bin(r).count("1") == 6 for r in rows)
        assert all(d == 3 for d in col_degrees(rows, n))
        return rows, n
    raise RuntimeError(f"no (3,6)-regular full-rank matrix found for n={n}")


def lift2(rows, n, rng):
    m = len(rows)
    top, bot = [], []
    for r in rows:
        a = b = 0
        for c in range(n):
            if r >> c & 1:
                if rng.random() < 0.5:
                    a |= 1 << c
                else:
                    b |= 1 << c
        top.append(a | (b << n))
        bot.append(b | (a << n))
    lifted = top + bot
    assert gf2_rank(lifted, 2 * n) == 2 * m
    assert all(bin(r).count("1") == 6 for r in lifted)
    assert all(d == 3 for d in col_degrees(lifted, 2 * n))
    return lifted, 2 * n


def dense(m, n, rng):
    for _ in range(10000):
        rows = [rng.getrandbits(n) for _ in range(m)]
        if any(r == 0 for r in rows):
            continue
        if any(d == 0 for d in col_degrees(rows, n)):
            continue
        if gf2_rank(rows, n) != m:
            continue
        return rows, n
    raise RuntimeError("no dense full-rank matrix found")


def to_alist(rows, n):
    m = len(rows)
    col_lists = [[r + 1 for r in range(m) if rows[r] >> c & 1] for c in range(n)]
    row_lists = [[c + 1 for c in range(n) if rows[r] >> c & 1] for r in range(m)]
    max_col = max(len(v) for v in col_lists)
    max_row = max(len(v) for v in row_lists)
    lines = [f"{n} {m}", f"{max_col} {max_row}"]
    lines.append(" ".join(str(len(v)) for v in col_lists))
    lines.append(" ".join(str(len(v)) for v in row_lists))
    for v in col_lists:
        lines.append(" ".join(str(x) for x in v + [0] * (max_col - len(v))))
    for v in row_lists:
        lines.append(" ".join(str(x) for x in v + [0] * (max_row - len(v))))
    return "\n".join(lines) + "\n"


def main():
    ldpc_rng = random.Random(LDPC_SEED)
    lift_rng = random.Random(LIFT_SEED)
    dense_rng = random.Random(DENSE_SEED)

    entries = []

    rows, n = hamming_7_4()
    entries.append(("HAMMING_7_4", "hamming", rows, n))

    rows, n = bch_15_7()
    entries.append(("BCH_15_7", "bch", rows, n))

    bases = {}
    for size in (12, 24, 48):
        rows, n = ldpc_36(size, ldpc_rng)
        bases[size] = (rows, n)
        entries.append((f"LDPC_{size}_{size // 2}", "ldpc", rows, n))
    for size in (12, 24, 48):
        rows, n = lift2(*bases[size], lift_rng)
        entries.append((f"LDPC_{size}_{size // 2}_X2", "ldpc", rows, n))

    for m in (16, 24):
        rows, n = dense(m, 2 * m, dense_rng)
        entries.append((f"DENSE_{2 * m}_{m}", "custom", rows, n))

    # global sanity: parity-check shape invariants and full rank everywhere
    for name, _family, rows, n in entries:
        assert 1 <= len(rows) < n and n >= 2, name
        assert gf2_rank(rows, n) == len(rows), name
        assert all(d >= 1 for d in col_degrees(rows, n)), name
        assert all(r != 0 for r in rows), name

    out = Path(__file__).resolve().parent.parent / "include" / "sap" / "catalog_data.hpp"
    with out.open("w") as f:
        f.write("#pragma once\n\n")
        f.write("// Generated by tools/gen_catalog.py; do not edit by hand.\n")
        f.write(f"// Seeds: ldpc={LDPC_SEED} lift={LIFT_SEED} dense={DENSE_SEED}\n\n")
        f.write("#include <array>\n#include <string_view>\n\n")
        f.write("namespace sap::catalog_data {\n\n")
        f.write(f"inline constexpr int kVersion = {CATALOG_VERSION};\n\n")
        f.write("struct Entry {\n")
        f.write("    std::string_view name;\n")
        f.write("    std::string_view family;\n")
        f.write("    std::string_view alist;\n")
        f.write("};\n\n")
        f.write(f"inline constexpr std::array<Entry, {len(entries)}> kEntries = {{{{\n")
        for name, family, rows, n in entries:
            f.write(f'    {{"{name}", "{family}",\n')
            f.write(f'     R"alist({to_alist(rows, n)})alist"}},\n')
        f.write("}};\n\n")
        f.write("}  // namespace sap::catalog_data\n")
    print(f"wrote {out} with {len(entries)} codes")


if __name__ == "__main__":
    main()
