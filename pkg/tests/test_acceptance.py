"""Acceptance gate: one test per shipped guarantee, each printing a
single PASS/FAIL line with the measured figure next to its tolerance.

The numbered criteria cover: the uncertainty floor (1), three-route
evolution equivalence (2), quadratic exactness of the phase-space
propagator (3), series termination and the classical-limit trend for
quartic potentials (4), expectation-route identity (5), wavefunction
reconstruction (6), the characteristic-function chain (7), negativity
witnesses (8), tomography (9), Ehrenfest tracking (10), and
byte-determinism of every built-in scenario (11).
"""

import time
from pathlib import Path

import numpy as np
import pytest

from wignerlab import (cat_state, classical_trajectory, cross_validate,
                       double_well, ehrenfest_track, expectation_operator,
                       forward_tomogram, free_particle, gaussian_packet,
                       harmonic, harmonic_eigenstate, inverse_tomogram,
                       make_grid, marginal_momentum, marginal_position,
                       moments, negativity, polynomial, propagate_moyal_exact,
                       propagate_moyal_truncated, propagate_schrodinger,
                       quartic, reconstruct_wavefunction, wigner_transform)
from wignerlab.scenarios import BUILTIN_SCENARIOS, builtin_config, run_scenario

from conftest import SQRT_HALF, fidelity

PERIOD = 2.0 * np.pi

CATALOG = (
    free_particle(),
    harmonic(1.0),
    quartic(0.1),
    double_well(-1.0, 0.1),
    polynomial([0.0, 0.0, 0.5, 0.02]),
)


def _verdict(num, ok, detail):
    line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'} — {detail}"
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def crossval_reports(grid256):
    """Shared three-route runs over the potential catalog (criteria 2, 7)."""
    psi = gaussian_packet(grid256, 1.0, 0.0, SQRT_HALF)
    return {V.tag if V.tag != "polynomial" else "cubic":
            cross_validate(psi, V, 1.0, 1e-3, [0.5, 1.0])
            for V in CATALOG}


def test_criterion_01_uncertainty_floor(battery256):
    started = time.monotonic()
    V = harmonic(1.0)
    worst = np.inf
    for name, psi in battery256:
        worst = min(worst, moments(psi).uncertainty_product)
        state = psi
        for _ in range(20):
            state = propagate_schrodinger(state, V, 0.01, 10)
            worst = min(worst, moments(state).uncertainty_product)
    attained = moments(dict(battery256)["gauss-min"]).uncertainty_product
    elapsed = time.monotonic() - started
    ok = (worst >= 0.5 - 1e-9 and abs(attained - 0.5) <= 1e-8
          and elapsed < 60.0)
    _verdict(1, ok, f"min dx*dp {worst:.12f} >= 0.5-1e-9, "
             f"gauss-min attains {attained:.10f} (0.5 +/- 1e-8), "
             f"{elapsed:.1f}s < 60s")


def test_criterion_02_three_route_equivalence(crossval_reports):
    gaps = {tag: crossval_reports[tag].max_pairwise()
            for tag in ("harmonic", "quartic", "double_well")}
    worst = max(gaps.values())
    _verdict(2, worst < 1e-5,
             f"max pairwise route L2 {worst:.3e} < 1e-5 over {sorted(gaps)}")


def test_criterion_03_quadratic_exactness(grid256):
    w0 = wigner_transform(gaussian_packet(grid256, 1.0, 0.0, SQRT_HALF))
    V = harmonic(1.0)
    out = propagate_moyal_exact(w0, V, PERIOD / 3200, 3200)
    # a full period of rigid rotation is the identity map
    period_err = float(np.sqrt(np.sum((out.values - w0.values) ** 2)
                               * grid256.dx * grid256.dp))
    a = propagate_moyal_truncated(w0, V, 1e-3, 200, 0)
    b = propagate_moyal_truncated(w0, V, 1e-3, 200, 3)
    nmax_gap = float(np.max(np.abs(a.values - b.values)))
    ok = period_err < 1e-6 and nmax_gap <= 1e-12
    _verdict(3, ok, f"full-period rotation L2 {period_err:.3e} < 1e-6, "
             f"n_max independence {nmax_gap:.1e} <= 1e-12")


def test_criterion_04_series_termination_and_classical_limit():
    V = quartic(0.1)

    def rel_gap(hbar, dt, t_final, n_max):
        g = make_grid(128, -8.0, 8.0, hbar=hbar)
        w = wigner_transform(gaussian_packet(g, 1.0, 0.0,
                                             SQRT_HALF * np.sqrt(hbar)))
        steps = round(t_final / dt)
        trunc = propagate_moyal_truncated(w, V, dt, steps, n_max)
        exact = propagate_moyal_exact(w, V, dt, steps)
        return float(np.sqrt(np.sum((trunc.values - exact.values) ** 2)
                             / np.sum(exact.values ** 2)))

    term = rel_gap(0.5, 5e-4, 0.5, 1)   # quartic series stops at n_max=1
    ladder = [rel_gap(hbar, dt, 2.0, 0)
              for hbar, dt in ((0.5, 5e-4), (0.25, 2.5e-4), (0.125, 1.25e-4))]
    ok = (term <= 1e-5 and ladder[0] > 1e-2
          and ladder[0] > ladder[1] > ladder[2])
    _verdict(4, ok, f"n_max=1 vs exact {term:.3e} <= 1e-5; Liouville gap "
             f"{ladder[0]:.3f} > 1e-2 at t=2, monotone under halved hbar: "
             f"{' > '.join(f'{g:.3f}' for g in ladder)}")


def test_criterion_05_expectation_route_identity(battery256):
    worst = 0.0
    for name, psi in battery256:
        op = moments(psi).as_dict()
        ps = moments(wigner_transform(psi)).as_dict()
        worst = max(worst, max(abs(op[k] - ps[k]) for k in op))
    _verdict(5, worst < 1e-8,
             f"max operator-vs-phase-space moment gap {worst:.3e} < 1e-8")


def test_criterion_06_reconstruction_fidelity(battery256):
    worst = 1.0
    for name, psi in battery256:
        rec = reconstruct_wavefunction(wigner_transform(psi))
        worst = min(worst, fidelity(rec, psi))
    _verdict(6, worst >= 1.0 - 1e-8,
             f"min roundtrip fidelity {worst:.12f} >= 1 - 1e-8 "
             f"(battery includes odd-parity states)")


def test_criterion_07_characteristic_chain(crossval_reports):
    worst_ac = max(max(report.pair_l2["ac"])
                   for report in crossval_reports.values())
    worst_res = max(max(report.factorization_residual)
                    for report in crossval_reports.values())
    ok = worst_ac < 1e-7 and worst_res < 1e-9
    _verdict(7, ok, f"characteristic-vs-wavefunction route L2 "
             f"{worst_ac:.3e} < 1e-7, factorization residual "
             f"{worst_res:.3e} < 1e-9, all catalog potentials")


def test_criterion_08_negativity(grid256, battery256):
    worst_volume = max(negativity(wigner_transform(psi))[1]
                       for name, psi in battery256
                       if name.startswith("gauss"))
    cat_min = negativity(wigner_transform(cat_state(grid256, 3.0,
                                                    SQRT_HALF)))[0]
    w1 = wigner_transform(harmonic_eigenstate(grid256, 1, 1.0))
    center = (np.argmin(np.abs(grid256.x)), np.argmin(np.abs(grid256.p)))
    origin_gap = abs(w1.values[center] + 1.0 / np.pi)
    ok = worst_volume <= 1e-9 and cat_min < -0.05 and origin_gap < 1e-6
    _verdict(8, ok, f"Gaussian negative volume {worst_volume:.1e} <= 1e-9, "
             f"cat min W {cat_min:.4f} < -0.05, "
             f"level-1 W(0,0) within {origin_gap:.1e} of -1/pi")


def test_criterion_09_tomography(sq128, battery_sq128):
    angles = np.linspace(0.0, np.pi, 180, endpoint=False)
    worst_marginal = 0.0
    for name, psi in battery_sq128:
        w = wigner_transform(psi)
        tomo = forward_tomogram(w, [0.0, np.pi / 2])
        worst_marginal = max(
            worst_marginal,
            float(np.max(np.abs(tomo.values[0] - marginal_position(w)))),
            float(np.max(np.abs(tomo.values[1] - marginal_momentum(w)))))

    worst_recon = 0.0
    for psi in (harmonic_eigenstate(sq128, 0, 1.0),
                cat_state(sq128, 3.0, SQRT_HALF)):
        w = wigner_transform(psi)
        rec = inverse_tomogram(forward_tomogram(w, angles), sq128)
        worst_recon = max(worst_recon, float(np.sqrt(
            np.sum((rec.values - w.values) ** 2) / np.sum(w.values ** 2))))

    worst_mean = 0.0
    states = dict(battery_sq128)
    for name in ("gauss-displaced", "cat", "ho-3"):
        psi = states[name]
        mean_x = expectation_operator(psi, "x")
        mean_p = expectation_operator(psi, "p")
        tomo = forward_tomogram(wigner_transform(psi), angles)
        for (mu, nu), density in zip(tomo.frames, tomo.values):
            mean = float(np.sum(tomo.x_axis * density) * tomo.dx)
            worst_mean = max(worst_mean,
                             abs(mean - (mu * mean_x + nu * mean_p)))

    ok = worst_marginal < 1e-7 and worst_recon < 1e-3 and worst_mean < 1e-7
    _verdict(9, ok, f"marginal identities {worst_marginal:.1e} < 1e-7, "
             f"180-angle inverse L2 {worst_recon:.3e} < 1e-3, "
             f"quadrature means {worst_mean:.1e} < 1e-7 over all angles")


def test_criterion_10_ehrenfest(grid256):
    psi = gaussian_packet(grid256, 2.0, 0.0, SQRT_HALF)
    table = ehrenfest_track(psi, harmonic(1.0), [0.5, 1.0, 1.5, 2.0], 5e-4)
    quad_gap = float(max(np.max(np.abs(table[:, 1] - table[:, 5])),
                         np.max(np.abs(table[:, 2] - table[:, 6]))))

    g = make_grid(1024, -16.0, 16.0)
    broad = gaussian_packet(g, 1.0, 0.0, 2.0)
    table = ehrenfest_track(broad, quartic(0.1), [0.0, 0.5, 1.0], 2e-3)
    force_gap = float(np.max(np.abs(table[:, 3] - table[:, 4])))

    ok = quad_gap < 1e-6 and force_gap > 1e-5
    _verdict(10, ok, f"harmonic mean-vs-classical gap {quad_gap:.1e} < 1e-6, "
             f"quartic broad-packet |<F> - F(<x>)| {force_gap:.2f} > "
             f"1e-5 (10x tolerance)")


def test_criterion_11_determinism(tmp_path, monkeypatch):
    def run_all(root):
        for name in sorted(BUILTIN_SCENARIOS):
            run_scenario(builtin_config(name), Path(root) / name)

    run_all(tmp_path / "a")
    monkeypatch.setenv("WIGNERLAB_WORKERS", "4")
    run_all(tmp_path / "b")

    compared = 0
    mismatched = []
    for path_a in sorted((tmp_path / "a").rglob("*")):
        if path_a.is_dir() or path_a.name == "timing.json":
            continue
        path_b = tmp_path / "b" / path_a.relative_to(tmp_path / "a")
        compared += 1
        if path_a.read_bytes() != path_b.read_bytes():
            mismatched.append(str(path_a.relative_to(tmp_path / "a")))
    ok = compared >= len(BUILTIN_SCENARIOS) and not mismatched
    _verdict(11, ok, f"{compared} artifacts byte-identical across runs "
             f"and worker counts ({len(BUILTIN_SCENARIOS)} scenarios)"
             + (f"; mismatched: {mismatched}" if mismatched else ""))
