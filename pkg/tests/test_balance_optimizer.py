import numpy as np
import pytest

from pmlforge.balance_optimizer import (
    BALANCE_BAND,
    brute_force_joint,
    conjecture_probe,
    design_balanced,
    fixed_split_report,
    is_balanced,
    split_maxima,
)
from pmlforge.composite_layer import SpectralWindow, build_composite
from pmlforge.zolotarev import solve_real

SYMMETRIC = SpectralWindow(-0.01, 0.01, 1.0)


@pytest.mark.parametrize("k", [2, 4, 6, 8])
def test_symmetric_window_splits_evenly(k):
    design, report = design_balanced(SYMMETRIC, k)
    if k % 2 == 0 and k > 2:
        assert report.chosen_l == k // 2
        _, me, mp, ratio = next(r for r in report.per_split if r[0] == report.chosen_l)
        assert me == pytest.approx(mp, rel=1e-12)
    assert design.split_l == report.chosen_l


def test_k2_single_candidate():
    _, report = design_balanced(SYMMETRIC, 2)
    assert [r[0] for r in report.per_split] == [1]
    _, me, mp, ratio = report.per_split[0]
    assert report.balanced == (1 / BALANCE_BAND <= ratio <= BALANCE_BAND)


def test_exhaustive_split_is_its_own_oracle():
    window = SpectralWindow(-0.3, 0.002, 2.0)
    design, report = design_balanced(window, 6)
    worst = {l: max(me, mp) for l, me, mp, _ in report.per_split}
    assert report.chosen_l == min(worst, key=worst.get)
    for l in worst:
        me, mp = split_maxima(build_composite(window, 6, l))
        assert max(me, mp) == pytest.approx(worst[l], rel=1e-12)


def test_regression_anchor_k8():
    design, report = design_balanced(SYMMETRIC, 8)
    assert report.chosen_l == 4
    assert report.balanced
    me, mp = split_maxima(design)
    assert me == pytest.approx(0.00945226781, rel=1e-8)
    assert mp == pytest.approx(me, rel=1e-12)


def test_split_maxima_are_component_optima():
    design = build_composite(SYMMETRIC, 5, 2)
    me, mp = split_maxima(design)
    assert me == pytest.approx(solve_real(0.1, 1.0, 2).max_ratio, rel=1e-10)
    assert mp == pytest.approx(solve_real(0.1, 1.0, 3).max_ratio, rel=1e-10)


def test_fixed_split_flags_imbalance():
    report = fixed_split_report(build_composite(SYMMETRIC, 8, 1))
    assert not report.balanced
    assert report.chosen_l == 1


def test_is_balanced_band():
    assert is_balanced(1.0, 9.9)
    assert not is_balanced(1.0, 10.1)
    assert is_balanced(0.0, 0.0)


def test_workers_agree():
    _, a = design_balanced(SYMMETRIC, 6)
    _, b = design_balanced(SYMMETRIC, 6, workers=3)
    assert a.per_split == b.per_split


def test_tail_power_one_skips_odd_tails():
    _, report = design_balanced(SYMMETRIC, 6, tail_power=1)
    assert [r[0] for r in report.per_split] == [2, 4]


def test_degenerate_probe_entry():
    entry = conjecture_probe([SpectralWindow(-1.0, 0.5, 0.5)], 2, n_starts=2)[0]
    assert entry.max_e == entry.max_p == 0.0


def test_part1_gap_crosses_one():
    windows = [SpectralWindow(l1, 0.05, 1.0) for l1 in (-0.5, -0.1, -0.02)]
    ratios = []
    for w in windows:
        _, report = design_balanced(w, 2)
        ratios.append(report.per_split[0][3])
    assert ratios[0] > 1 > ratios[-1]


def test_brute_force_anchor_k2():
    value, roots = brute_force_joint(SYMMETRIC, 2, n_starts=20)
    # one root per segment at the k = 1 optimum: sqrt(ab) on [0.1, 1]
    assert value == pytest.approx(0.5194938533, rel=1e-6)
    assert sorted(np.abs(roots)) == pytest.approx([np.sqrt(0.1)] * 2, rel=1e-4)


def test_brute_force_limit():
    with pytest.raises(ValueError):
        brute_force_joint(SYMMETRIC, 5)
