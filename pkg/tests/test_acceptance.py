"""End-to-end acceptance checks; each test records one PASS/FAIL line."""
import itertools
import json
import math
import subprocess
import sys
import time

import numpy as np

from ghzrsp import kernels
from ghzrsp.audit import audit_tables
from ghzrsp.bases import alice_basis_d2, alice_basis_d4, gram_deviation, phase_basis
from ghzrsp.checks import run_suites
from ghzrsp.corrections import derive_monomial_correction
from ghzrsp.protocol import Enumerate, bob_rotated_state, run_qubit_rsp, run_qudit_rsp, stage_order_experiment
from ghzrsp.qudit import Angles2, equal_up_to_global_phase, ghz, make_state, measure_branches
from ghzrsp.sampling import (
    random_angles2,
    random_angles4,
    random_angles8,
    random_monomial,
    random_unit_vector,
    rng_for,
)

TOL = 1e-12


def _deterministic(traces, d):
    return (
        len(traces) == d * d
        and all(abs(t.probability - 1 / d ** 2) <= TOL for t in traces)
        and all(t.fidelity >= 1 - TOL for t in traces)
    )


def test_01_qubit_determinism(acceptance):
    rng = rng_for(1)
    params = [random_angles2(rng) for _ in range(1000)]
    start = time.perf_counter()
    ok = all(_deterministic(run_qubit_rsp(a, Enumerate()), 2) for a in params)
    elapsed = time.perf_counter() - start
    passed = acceptance(1, "qubit determinism", ok and elapsed < 5.0, f"{elapsed:.2f} s")
    assert passed


def test_02_qubit_cost(acceptance):
    rng = rng_for(2)
    bits = {t.total_bits for _ in range(200) for t in run_qubit_rsp(random_angles2(rng))}
    assert acceptance(2, "qubit cost is 2 bits", bits == {2}, f"observed {sorted(bits)}")


def test_03_qubit_table_audit(acceptance):
    rep = audit_tables("qubit", 100, 3)
    ok = rep.ok and all(p.agrees and p.checked == 100 for p in rep.pairs)
    assert acceptance(3, "qubit correction table audit", ok, f"{len(rep.discrepancies)} discrepancies")


def test_04_d4_determinism(acceptance):
    rng = rng_for(4)
    params = [random_angles4(rng) for _ in range(200)]
    start = time.perf_counter()
    ok = True
    for a in params:
        traces = run_qudit_rsp(4, a, Enumerate())
        ok &= _deterministic(traces, 4) and all(t.total_bits == 4 for t in traces)
    elapsed = time.perf_counter() - start
    assert acceptance(4, "d=4 determinism", ok and elapsed < 30.0, f"{elapsed:.2f} s")


def _rotated_branch1(a):
    g1, g2, g3 = a.gammas
    s1, s2 = math.sin(g1), math.sin(g2)
    v = np.zeros(16)
    v[4 * 1 + 0] = s1 * math.cos(g2)
    v[4 * 0 + 1] = math.cos(g1)
    v[4 * 3 + 2] = s1 * s2 * math.sin(g3)
    v[4 * 2 + 3] = s1 * s2 * math.cos(g3)
    return v


def test_05_rotated_branch_coefficients(acceptance):
    rng = rng_for(5)
    worst = 0.0
    for _ in range(100):
        a = random_angles4(rng)
        worst = max(worst, float(np.max(np.abs(bob_rotated_state(a, 1).amps - _rotated_branch1(a)))))
    assert acceptance(5, "rotated branch-1 coefficients", worst <= TOL, f"max error {worst:.1e}")


def test_06_d4_table_audit(acceptance):
    rep = audit_tables("d4", 100, 6)
    oracle_ok = all(p.oracle_max_deficit <= TOL and p.checked == 100 for p in rep.pairs)
    print("d=4 correction table audit report:")
    for p in rep.pairs:
        print(f"  {p.outcomes}  {p.listed_name:<22} agrees={p.agrees}  "
              f"max deficit={p.max_fidelity_deficit:.1e}  oracle constant={p.oracle_constant}")
    print(f"  discrepancies: {len(rep.discrepancies)}")
    detail = f"{sum(p.agrees for p in rep.pairs)}/16 listed matrices agree"
    assert acceptance(6, "d=4 correction table audit", oracle_ok and len(rep.pairs) == 16, detail)


def _reconstruction_error(d, basis):
    branches = measure_branches(ghz(3, d), 0, basis)
    total = sum(np.kron(basis[b.outcome], b.collapsed.amps) for b in branches) / math.sqrt(d)
    probs_ok = all(abs(b.probability - 1 / d) <= TOL for b in branches)
    return float(np.max(np.abs(total - ghz(3, d).amps))), probs_ok


def test_07_ghz_reconstruction(acceptance):
    rng = rng_for(7)
    worst, probs = 0.0, True
    for _ in range(100):
        err, ok = _reconstruction_error(2, alice_basis_d2(random_angles2(rng).theta))
        worst, probs = max(worst, err), probs and ok
        err, ok = _reconstruction_error(4, alice_basis_d4(*random_angles4(rng).gammas))
        worst, probs = max(worst, err), probs and ok
    assert acceptance(7, "GHZ reconstruction d=2, d=4", worst <= TOL and probs, f"max error {worst:.1e}")


def test_08_basis_suite(acceptance):
    results = [r for d in (2, 4, 8) for r in run_suites(d, 1000, 8)]
    wanted = {"alice_basis_d2", "alice_basis_d4", "phase_basis(2)", "phase_basis(4)",
              "phase_basis(8)", "xi_basis"}
    names = {r.name for r in results}
    suites_ok = wanted <= names and all(r.passed and r.samples >= 1000 for r in results)
    rng = rng_for(80)
    orth = 0.0
    for _ in range(1000):
        u = alice_basis_d4(*random_angles4(rng).gammas).vectors
        orth = max(orth, float(np.max(np.abs(u.imag))),
                   float(np.max(np.abs(u.real @ u.real.T - np.eye(4)))))
    worst = max(r.max_deviation for r in results)
    assert acceptance(8, "basis orthonormality", suites_ok and orth <= TOL,
                      f"max Gram deviation {worst:.1e}, orthogonality {orth:.1e}")


def test_09_d8(acceptance):
    rng = rng_for(9)
    worst = 0.0
    for _ in range(1000):
        phis = np.concatenate([[0.0], rng.uniform(0, 2 * math.pi, 7)])
        worst = max(worst, gram_deviation(phase_basis(8, phis).vectors))
    runs_ok = True
    for _ in range(10):
        traces = run_qudit_rsp(8, random_angles8(rng))
        runs_ok &= _deterministic(traces, 8) and all(t.total_bits == 6 for t in traces)
    assert acceptance(9, "d=8 phase stage and full runs", worst <= TOL and runs_ok,
                      f"phase Gram {worst:.1e}, 64-branch runs ok={runs_ok}")


def test_10_stage_order(acceptance):
    rep = stage_order_experiment(Angles2(math.pi / 3, math.pi / 5))
    worst = min(b.best_fixed_fidelity for b in rep.phi_first)
    ok = rep.fixed_set_fails_swapped and rep.oracle_fixes_swapped and rep.fixed_set_fixes_theta_first
    assert acceptance(10, "stage-order asymmetry", ok, f"worst fixed-set fidelity {worst:.3f}")


def test_11_oracle_brute_force(acceptance):
    rng = rng_for(11)
    perms = np.array(list(itertools.permutations(range(2))), dtype=np.intp)
    grid = np.exp(2j * math.pi * np.arange(360) / 360)
    agree = 0
    for _ in range(100):
        v = make_state([2], random_unit_vector(rng, 2))
        t = make_state([2], random_monomial(rng, 2, n_grid=360) @ v.amps)
        m = derive_monomial_correction(v, t)
        _, pi, phase_idx = kernels.monomial_search(v.amps, t.amps, perms, 360)
        brute = np.zeros((2, 2), dtype=complex)
        brute[np.arange(2), perms[pi]] = grid[list(phase_idx)]
        agree += equal_up_to_global_phase(make_state([2], m @ v.amps), make_state([2], brute @ v.amps))
    assert acceptance(11, "oracle matches brute force", agree == 100, f"{agree}/100")


def _cli_bytes(argv):
    res = subprocess.run([sys.executable, "-m", "ghzrsp", *argv], capture_output=True)
    return res.returncode, res.stdout


def test_12_reproducibility(acceptance):
    configs = [
        ["run", "--protocol", "qubit", "--theta", "1.1", "--phi", "2.2", "--mode", "sample", "--seed", "5"],
        ["run", "--protocol", "d4", "--gamma1", "0.3", "--gamma2", "0.7", "--gamma3", "1.1",
         "--alpha1", "0.2", "--alpha2", "0.4", "--alpha3", "0.6", "--mode", "sample", "--seed", "5"],
        ["run", "--protocol", "qubit", "--theta", "1.1", "--phi", "2.2"],
    ]
    ok = True
    for argv in configs:
        c1, a = _cli_bytes(argv)
        c2, b = _cli_bytes(argv)
        ok &= c1 == c2 == 0 and a == b and bool(json.loads(a)["traces"])
    assert acceptance(12, "byte-identical JSON", ok, f"{len(configs)} configs")
