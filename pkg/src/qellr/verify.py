"""
The acceptance property suite.  Each criterion returns a plain dict with a
boolean "pass" and deterministic details; timings are kept out of the
report so that two runs produce identical bytes.
"""

from __future__ import annotations

import itertools
import json
import random
import sys
import time
from typing import Callable, Dict, List, Tuple

from .cochains import differential, random_cochain, random_cocycle
from .cyclotomic import Cyclotomic
from .groups import (GradedGroup, cyclic, dihedral, graded_cyclic, graded_product, graded_wreath,
                     real_conjugacy_classes, split_graded, symmetric, symmetric_graded, trivially_graded)


# ---------------------------------------------------------------- 1. transgression


def _groupoid_agree(lhs, rhs, morphisms, objects, degree, modulus, sign=-1) -> bool:
    for ms in itertools.product(morphisms, repeat=degree):
        for x in objects:
            if (lhs(ms, x) - sign * rhs(ms, x)) % modulus:
                return False
    return True


def transgression_suite(seeds: int = 100, modulus: int = 6) -> Dict[str, object]:
    """d d = 0, the three transgressions against the differentials, and the restriction square.

    In the groupoid differential used here the transgressions anticommute
    with d (they lower degree by one), so the identities carry a minus sign.
    """
    from .transgression import (groupoid_differential, real_transgression_cochain2, real_transgression_cochain3,
                                real_transgression_ref_cochain1, real_transgression_ref_cochain2,
                                transgression_cochain)
    groups = {"D4": dihedral(2), "D6": dihedral(3), "D8": dihedral(4), "S3xZ2": split_graded(symmetric(3))}
    details = {}
    ok_all = True
    for name, G in groups.items():
        K = list(G.kernel_elements)
        kpos = {x: i for i, x in enumerate(K)}
        ker = trivially_graded(G.kernel())
        counts = {"dd": 0, "plain": 0, "real": 0, "ref": 0, "square": 0}
        for seed in range(seeds):
            c = random_cochain(G, 2, bool(seed % 2), modulus, seed)
            counts["dd"] += bool(differential(differential(c)).is_zero())
            lam = random_cochain(ker, 2, False, modulus, seed)
            counts["plain"] += _groupoid_agree(transgression_cochain(differential(lam)),
                                               groupoid_differential(transgression_cochain(lam)),
                                               range(ker.order), range(ker.order), 2, modulus)
            lhat = random_cochain(G, 2, False, modulus, seed)
            counts["real"] += _groupoid_agree(real_transgression_cochain3(differential(lhat)),
                                              groupoid_differential(real_transgression_cochain2(lhat)),
                                              range(G.order), K, 2, modulus)
            mu = random_cochain(G, 1, True, modulus, seed)
            counts["ref"] += _groupoid_agree(real_transgression_ref_cochain2(differential(mu)),
                                             groupoid_differential(real_transgression_ref_cochain1(mu)),
                                             range(G.order), K, 1, modulus)
            ahat = random_cochain(G, 3, False, modulus, seed)
            T, W = real_transgression_cochain3(ahat), transgression_cochain(ahat)
            counts["square"] += all(T(ms, x) == W(tuple(kpos[y] for y in ms), kpos[x])
                                    for ms in itertools.product(K, repeat=2) for x in K)
        ok = all(v == seeds for v in counts.values())
        ok_all &= ok
        details[name] = {"seeds": seeds, "passed": counts, "pass": ok}
    return {"pass": ok_all, "groups": details}


# ---------------------------------------------------------------- 2. structure lemmas


def structure_lemmas(cocycles: int = 20) -> Dict[str, object]:
    from .enhanced import check_real_central, enhanced_model, i_g_isomorphism
    d8 = dihedral(4)
    classes = real_conjugacy_classes(d8).classes
    central_ok = 0
    for seed in range(cocycles):
        ahat = random_cocycle(d8, 3, 4, seed=seed)
        central_ok += all(check_real_central(enhanced_model(d8, g, None, ahat)) for g in classes)
    G = graded_product(symmetric_graded(3), trivially_graded(cyclic(3)))
    data = real_conjugacy_classes(G)
    plus = [g for g in data.classes if data.sign[g] == 1]
    iso = []
    for seed in range(3):
        ahat = random_cocycle(G, 3, 6, seed=seed)
        for g in plus:
            ig = i_g_isomorphism(ahat, g)
            iso.append(bool(ig.is_homomorphism() and ig.is_bijective() and ig.negates_center()
                            and ig.negates_rotation()))
    ok = central_ok == cocycles and bool(plus) and all(iso)
    return {"pass": ok, "real_central": f"{central_ok}/{cocycles}", "plus_classes": len(plus),
            "isomorphisms_checked": len(iso), "isomorphisms_ok": sum(iso)}


# ---------------------------------------------------------------- 3. cyclic presentations


def cyclic_presentations(max_n: int = 6) -> Dict[str, object]:
    from .qell import qell_point, qellr_point
    rows = []
    ok = True
    for n in range(1, max_n + 1):
        expected = sorted(f"x_{m}^{n} - q^{m}" for m in range(n))
        cplx = qell_point(cyclic(n))
        real = qellr_point(dihedral(n))
        for label, struct in (("complex", cplx), ("real", real)):
            pres = struct.presentations
            rels = sorted(r for p in pres.values() for r in p.relations)
            good = (len(struct.components) == n and all(c.rank == n for c in struct.components)
                    and len(pres) == n and all(p.verified for p in pres.values()) and rels == expected)
            if label == "real":
                good = good and all(b.real_type == "R" for c in struct.components for b in c.basis)
            ok &= good
            rows.append({"n": n, "theory": label, "pass": good})
    return {"pass": ok, "cases": rows}


# ---------------------------------------------------------------- 4. Real types


def real_type_theorem(max_n: int = 6) -> Dict[str, object]:
    """Every irreducible of Z_n is of type R under D_2n, and so is every irreducible of the cyclic models."""
    from .characters import character_table, real_type
    from .enhanced import enhanced_model, model_irreps
    bad = []
    checked = 0
    for n in range(1, max_n + 1):
        D = dihedral(n)
        T = character_table(D.kernel())
        for row in range(len(T)):
            checked += 1
            if real_type(D, T, row).kind != "R":
                bad.append(["Z_n", n, row])
        for m in D.kernel_elements:
            lift = enhanced_model(D, m).lift_order
            for k in (1, 2):
                for ir in model_irreps(enhanced_model(D, m, lift * k)):
                    checked += 1
                    if ir.real_type != "R":
                        bad.append(["model", n, m, lift * k])
    return {"pass": not bad, "irreducibles_checked": checked, "non_real": bad}


# ---------------------------------------------------------------- 5. Mackey


def mackey_counts(seed: int = 0) -> Dict[str, object]:
    from .mackey import check_configuration, standard_configurations
    results = [check_configuration(cfg) for cfg in standard_configurations(seed)]
    rotation = [r for r in results if r["name"].startswith("rotation")]
    ok = len(results) >= 5 and bool(rotation) and all(r["pass"] for r in results) \
        and all(r["twist_recovered"] for r in rotation)
    return {"pass": ok, "configurations": results}


# ---------------------------------------------------------------- 6. Tate


def tate_suite(max_n: int = 6, compare_n: int = 4) -> Dict[str, object]:
    from .tate import check_all, pullback_square, real_fixed_points, torsion_vs_qell
    out = {}
    ok = True
    for N in range(1, max_n + 1):
        r = check_all(N)
        out[f"T[{N}]"] = r["pass"]
        ok &= r["pass"]
    for N in range(1, compare_n + 1):
        a, b, c = torsion_vs_qell(N)["pass"], real_fixed_points(N)["pass"], pullback_square(N)["pass"]
        out[f"compare[{N}]"] = {"torsion_vs_qell": a, "real_fixed_points": b, "pullback_square": c}
        ok &= a and b and c
    return {"pass": bool(ok), "checks": out}


# ---------------------------------------------------------------- 7. power operations


def tensor_trace(perm_action: List[List[int]], N: int, label) -> int:
    """Trace of (g; s) on the N-th tensor power of a permutation representation.

    ``perm_action[g][x]`` is the point g.x; the basis tensor e_{x_1} (x) ... (x) e_{x_N}
    goes to the tensor with g_{s(j)}.x_j in slot s(j).  Counts fixed basis tensors.
    """
    gs, s = label
    npts = len(perm_action[0])
    count = 0
    for xs in itertools.product(range(npts), repeat=N):
        image = [None] * N
        for j in range(N):
            image[s[j]] = perm_action[gs[s[j]]][xs[j]]
        count += tuple(image) == xs
    return count


def _permutation_reps(grp) -> List[Tuple[str, List[List[int]]]]:
    """Regular and coset permutation representations of a small group (left actions)."""
    from .groups import subgroups_up_to_conjugacy
    out = []
    for H in subgroups_up_to_conjugacy(grp):
        cosets = []
        seen = set()
        for a in range(grp.order):
            c = tuple(sorted(grp.mul(a, h) for h in H))
            if c not in seen:
                seen.add(c)
                cosets.append(c)
        index = {c: i for i, c in enumerate(cosets)}
        act = [[index[tuple(sorted(grp.mul(g, x) for x in c))] for c in cosets] for g in range(grp.order)]
        out.append((f"G/{len(H)}", act))
    return out


def power_rep_oracle(max_order: int = 4, max_N: int = 3) -> Dict[str, object]:
    from .power import power_character
    cases = []
    ok = True
    for name, G in (("Z2", GradedGroup(cyclic(2), [1, -1])), ("D4", dihedral(2)), ("Z4", graded_cyclic(4)),
                    ("Z2xZ2", split_graded(cyclic(2)))):
        if G.order > max_order:
            continue
        ker = G.group.subgroup(G.kernel_elements)
        emb = ker.embedding
        for rep_name, act in _permutation_reps(ker):
            chi_local = [sum(1 for x in range(len(act[0])) if act[g][x] == x) for g in range(ker.order)]
            chi = {emb[g]: Cyclotomic.rational(chi_local[g]) for g in range(ker.order)}
            # tensor traces need the action on base indices
            act_base = {emb[g]: act[g] for g in range(ker.order)}
            for N in range(1, max_N + 1):
                W = graded_wreath(G, N)
                vals = power_character(G, chi.__getitem__, N, W)
                good = all(vals[y] == tensor_trace(act_base, N, W.group.labels[y]) for y in W.kernel_elements)
                ok &= good
                cases.append({"group": name, "rep": rep_name, "N": N, "pass": good})
    return {"pass": ok, "cases": cases}


def power_suite(quick: bool = False) -> Dict[str, object]:
    from .power import _LoopValues, qellr_power, verify_twist_identities
    from .qell import QEllStructure, forgetful, qellr_point, random_class
    out: Dict[str, object] = {}
    d4 = dihedral(2)
    alpha = random_cocycle(d4, 3, 4, seed=1)
    beta = random_cocycle(d4, 3, 4, seed=2)
    ident = []
    for M, N in ((1, 1), (1, 2), (2, 1), (2, 2)):
        if quick and M * N > 2:
            continue
        r = verify_twist_identities(alpha, beta, M, N, samples=150)
        ident.append({"M": M, "N": N, **{k: v["pass"] for k, v in r.items()}})
    mutant = verify_twist_identities(alpha, beta, 1, 2, samples=150, misaligned=True)
    ok_ident = all(all(v for k, v in row.items() if k not in ("M", "N")) for row in ident)
    mutation_caught = not mutant["sum"]["pass"] and not mutant["product"]["pass"]
    out["twist_identities"] = {"cases": ident, "mutation_caught": mutation_caught,
                               "pass": ok_ident and mutation_caught}
    out["power_rep"] = power_rep_oracle(4, 2 if quick else 3)

    z2 = GradedGroup(cyclic(2), [1, -1])
    laws = []
    for G in (z2, d4, dihedral(3)):
        S = qellr_point(G)
        for seed in range(2):
            x = random_class(S, seed, terms=3, span=1)
            p0 = qellr_power(x, 0)
            p1 = qellr_power(x, 1)
            laws.append(p0.terms == p0.structure.one().terms and p1.terms == x.terms)
    out["zero_one_laws"] = {"checked": len(laws), "pass": all(laws)}

    rng = random.Random(0)
    ext_checks = []
    S = qellr_point(z2)
    x = random_class(S, 3, terms=2, span=1)
    powers = {N: qellr_power(x, N) for N in range(1, 4)}
    values = {N: _LoopValues(p) for N, p in powers.items()}
    for M, N in ((1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)):
        if M + N > 4 or (quick and M + N > 3):
            continue
        if M + N not in powers:
            powers[M + N] = qellr_power(x, M + N)
            values[M + N] = _LoopValues(powers[M + N])
        WM, WN, WMN = (powers[k].structure.base for k in (M, N, M + N))
        idx = {lab: i for i, lab in enumerate(WMN.group.labels)}

        def join(a, b):
            gs, s = WM.group.labels[a]
            hs, t = WN.group.labels[b]
            return idx[(gs + hs, s + tuple(M + v for v in t))]

        good = True
        for y1 in WM.kernel_elements:
            for y2 in WN.kernel_elements:
                z1 = rng.choice([s for s in WM.kernel_elements if WM.mul(s, y1) == WM.mul(y1, s)])
                z2_ = rng.choice([s for s in WN.kernel_elements if WN.mul(s, y2) == WN.mul(y2, s)])
                if values[M + N](join(y1, y2), join(z1, z2_)) != values[M](y1, z1) * values[N](y2, z2_):
                    good = False
        ext_checks.append({"M": M, "N": N, "pass": good})
    out["external_product"] = {"cases": ext_checks, "pass": all(c["pass"] for c in ext_checks)}

    compat = []
    for G, Ns in ((z2, (2, 3)), (d4, (2, 3)), (dihedral(3), (2,))):
        S = qellr_point(G)
        for N in Ns:
            if quick and N > 2:
                continue
            T = QEllStructure(graded_wreath(G, N), real=True)
            for seed in range(2):
                x = random_class(S, seed, terms=3, span=1)
                P = qellr_power(x, N, target=T)
                compat.append(forgetful(P).terms == qellr_power(forgetful(x), N, target=T.companion()).terms)
    out["forgetful_square"] = {"checked": len(compat), "pass": all(compat)}
    ok = all(v["pass"] for v in out.values())
    return {"pass": ok, **out}


# ---------------------------------------------------------------- 8. characters


def character_suite() -> Dict[str, object]:
    from .qell import character_sheet, forget_sheet, forgetful, qellr_point
    res = {}
    for name, G in (("D4", dihedral(2)), ("D8", dihedral(4))):
        S = qellr_point(G)
        good = all(forget_sheet(character_sheet(b)) == character_sheet(forgetful(b))
                   for b in S.basis_elements())
        res[name] = {"basis_classes": S.rank, "pass": good}
    return {"pass": all(r["pass"] for r in res.values()), "groups": res}


# ---------------------------------------------------------------- 9. determinism


def determinism() -> Dict[str, object]:
    """Recompute two deterministic payloads from scratch and compare the bytes."""
    from .qell import qellr_point, structure_json
    from .tate import multiplication_table

    def payload():
        return json.dumps({"qellr": structure_json(qellr_point(dihedral(4))),
                           "tate": multiplication_table(4),
                           "mackey": mackey_counts()}, sort_keys=True).encode()

    a, b = payload(), payload()
    return {"pass": a == b, "bytes": len(a)}


CRITERIA: List[Tuple[int, str, Callable[[bool], Dict[str, object]]]] = [
    (1, "transgression suite", lambda quick: transgression_suite(10 if quick else 100)),
    (2, "structure lemmas", lambda quick: structure_lemmas(5 if quick else 20)),
    (3, "cyclic presentations", lambda quick: cyclic_presentations(4 if quick else 6)),
    (4, "Real type theorem", lambda quick: real_type_theorem(4 if quick else 6)),
    (5, "Mackey counts", lambda quick: mackey_counts()),
    (6, "Tate suite", lambda quick: tate_suite(5 if quick else 6, 3 if quick else 4)),
    (7, "power suite", lambda quick: power_suite(quick)),
    (8, "character suite", lambda quick: character_suite()),
    (9, "determinism", lambda quick: determinism()),
]


def run_suite(quick: bool = False, only=None, log=sys.stderr) -> Dict[str, object]:
    rows = []
    for cid, name, fn in CRITERIA:
        if only and cid not in only:
            continue
        t0 = time.perf_counter()
        try:
            detail = fn(quick)
        except Exception as exc:  # a crash is a failure of that criterion
            detail = {"pass": False, "error": f"{type(exc).__name__}: {exc}"}
        elapsed = time.perf_counter() - t0
        if log is not None:
            print(f"[{cid}] {name:<24} {'PASS' if detail['pass'] else 'FAIL'}  {elapsed:7.2f}s", file=log)
        rows.append({"id": cid, "name": name, "pass": bool(detail["pass"]), "detail": detail})
    return {"quick": quick, "criteria": rows, "pass": all(r["pass"] for r in rows)}
