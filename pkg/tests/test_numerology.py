import warnings

import pytest

from hitchin import numerology as nm
from hitchin.numerology import (
    EXCLUDED,
    NOT_EXCLUDED,
    CoprimalityWarning,
    LedgerComponent,
    SevereLedgerEntry,
    StratumLabel,
    dim_base,
    dim_fiber,
    dim_total,
    dims_report,
    enumerate_lambda,
    euler_char_spectral,
    exclusion_sweep,
    iter_large_grid,
    lambda_count_series,
    make_setup,
    relative_gap,
    severi_ledger,
    stratum_base_dim,
    support_exclusion_test,
)


def setup(g, d, n, e=1, canonical=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CoprimalityWarning)
        return make_setup(g, d, n, e, canonical)


def L(*pairs):
    return StratumLabel(pairs)


# -- setups -----------------------------------------------------------------------

def test_mode_inference_and_validation():
    assert setup(2, 3, 2).mode == nm.LARGE
    assert setup(2, 2, 2).canonical
    with pytest.raises(ValueError, match="unsupported degree regime"):
        setup(2, 1, 2)
    with pytest.raises(ValueError):
        setup(0, -2, 2)
    with pytest.raises(ValueError):
        setup(2, 3, 2, canonical=True)


def test_coprimality_is_only_a_warning():
    with pytest.warns(CoprimalityWarning):
        s = make_setup(2, 3, 2, e=2)
    assert dim_base(s) == 7


# -- single-point formulas ------------------------------------------------------------

def test_dimension_examples():
    s = setup(2, 3, 2)
    assert (dim_base(s), dim_fiber(s), dim_total(s), relative_gap(s)) == (7, 6, 13, -1)
    assert dims_report(s) == {"d_base": 7, "d_fiber": 6, "d_total": 13, "gap": -1}
    assert dim_base(setup(2, 2, 2)) == 5
    assert dim_fiber(setup(2, 2, 2)) == 5
    assert dim_base(setup(0, 1, 1)) == 2
    for g in range(4):
        assert dim_fiber(setup(g, 2 * g + 1, 1)) == g
        assert euler_char_spectral(setup(g, 2 * g + 1, 1)) == 1 - g


def test_large_grid_identities():
    for g, d, n in iter_large_grid():
        s = setup(g, d, n)
        assert dim_base(s) + dim_fiber(s) == n * n * d + 1
        assert dim_fiber(s) - dim_base(s) == n * (2 * g - 2 - d) + 1


def test_canonical_identities():
    for g in range(1, 4):
        for n in range(1, 7):
            s = setup(g, 2 * g - 2, n)
            assert dim_base(s) == dim_fiber(s) == n * n * (g - 1) + 1
            assert relative_gap(s) == 0


# -- labels -----------------------------------------------------------------------------

def test_enumerate_lambda_examples():
    assert [lab.pairs for lab in enumerate_lambda(1)] == [((1, 1),)]
    assert {lab.pairs for lab in enumerate_lambda(2)} == {((2, 1),), ((1, 2),), ((1, 1), (1, 1))}
    assert {str(lab) for lab in enumerate_lambda(3)} == {
        "{(3,1)}", "{(1,3)}", "{(2,1),(1,1)}", "{(1,2),(1,1)}", "{(1,1),(1,1),(1,1)}"}


def test_enumerate_lambda_against_generating_function():
    series = lambda_count_series(8)
    # independent hand-check of the first coefficients
    assert series[:5] == [1, 1, 3, 5, 11]
    for n in range(1, 9):
        labels = enumerate_lambda(n)
        keys = [tuple(map(tuple, lab.to_json())) for lab in labels]
        assert len(set(keys)) == len(keys) == series[n]
        assert all(lab.n == n for lab in labels)
        assert L((n, 1)) in labels and L(*[(1, n)]) in labels


def test_enumerate_lambda_range():
    for bad in (0, 13):
        with pytest.raises(ValueError):
            enumerate_lambda(bad)


def test_label_order_is_canonical():
    assert L((1, 2), (2, 1)).pairs == ((2, 1), (1, 2))
    assert L((1, 1), (1, 2)) == L((1, 2), (1, 1))


def test_stratum_base_dim_examples():
    s = setup(2, 3, 2)
    assert stratum_base_dim(L((2, 1)), s) == 7
    assert stratum_base_dim(L((1, 1), (1, 1)), s) == 4
    assert stratum_base_dim(L((1, 2)), s) == 2
    with pytest.raises(ValueError):
        stratum_base_dim(L((3, 1)), s)


# -- exclusion ------------------------------------------------------------------------

def test_support_exclusion_examples():
    s = setup(2, 3, 2)
    row = support_exclusion_test(L((2, 1)), s)
    assert (row.lhs, row.rhs, row.verdict) == (0, 0, NOT_EXCLUDED)
    row = support_exclusion_test(L((1, 1), (1, 1)), s)
    assert (row.lhs, row.rhs, row.verdict) == (-1, 0, EXCLUDED)
    row = support_exclusion_test(L((1, 2)), setup(2, 2, 2))
    assert row.verdict == NOT_EXCLUDED and row.rhs == 0
    assert row.to_json() == {"lambda": [[1, 2]], "lhs": 0, "rhs": 0, "verdict": "NotExcluded"}


def test_exclusion_sweep_examples():
    def survivors(s):
        return sum(r.verdict == NOT_EXCLUDED for r in exclusion_sweep(s))
    assert survivors(setup(2, 3, 2)) == 1
    assert survivors(setup(0, 1, 3)) == 1
    assert survivors(setup(2, 2, 2)) == 3


def test_exclusion_sweep_grid():
    for g, d, n in iter_large_grid():
        rows = exclusion_sweep(setup(g, d, n))
        alive = [r.label for r in rows if r.verdict == NOT_EXCLUDED]
        assert alive == [L((n, 1))]
    for g in range(1, 4):
        for n in range(1, 7):
            assert all(r.verdict == NOT_EXCLUDED for r in exclusion_sweep(setup(g, 2 * g - 2, n)))


# -- Severi ledger ---------------------------------------------------------------------

def test_ledger_elliptic_bounds_coincide():
    s = setup(2, 3, 2)
    report = severi_ledger(SevereLedgerEntry.generic(L((2, 1)), s), s)
    assert report["upper"] == report["lower_sum"] == report["d_ab"] == dim_fiber(s)
    assert report["verdict"] == NOT_EXCLUDED


def test_ledger_two_lines_excluded():
    s = setup(2, 3, 2)
    entry = SevereLedgerEntry(((1, 2, 0), (1, 2, 0)))
    report = severi_ledger(entry, s)
    assert report["upper"] == 3
    # each line component has d_f(1) = g = 2
    assert report["d_ab"] == 4
    assert [c["severi_lower"] for c in report["components"]] == [2, 2]
    assert report["lower_sum"] == 4
    assert report["verdict"] == EXCLUDED


def test_ledger_totally_degenerate_component():
    s = setup(2, 3, 2)
    df1 = dim_fiber(s.with_rank(1))
    report = severi_ledger(SevereLedgerEntry(((1, 2, df1), (1, 2, 0))), s)
    assert report["components"][0]["d_ab"] == 0


def test_ledger_additivity():
    s = setup(1, 3, 4)
    comps = (LedgerComponent(2, 5, 1), LedgerComponent(1, 2, 0), LedgerComponent(1, 3, 1))
    report = severi_ledger(SevereLedgerEntry(comps), s)
    assert report["d_a"] == 10
    assert report["d_ab"] == sum(c["d_ab"] for c in report["components"])


def test_ledger_rejects_bad_delta():
    s = setup(2, 3, 2)
    with pytest.raises(ValueError):
        severi_ledger(SevereLedgerEntry(((2, 7, -1),)), s)
    with pytest.raises(ValueError, match="delta exceeds fiber dimension"):
        severi_ledger(SevereLedgerEntry(((2, 7, 99),)), s)
