import itertools

import numpy as np
import pytest

from circle_genus import census_kernel as kernel
from circle_genus.census import (
    CACHE_HEADER,
    count_f,
    count_f_python,
    count_P_n,
    l_count,
    read_cache,
    scan,
    shard_prefixes,
    verify_suite,
)
from circle_genus.circle_core import CircleGraph, all_trees, canonicalize, min_period, rotate
from circle_genus.errors import DomainError, PreconditionError
from circle_genus.genus_map import genus
from circle_genus.reduction import is_genus_one

from .graphs import CROSS_TREE, GENUS_TWO


class TestKernel:
    def test_pair_tables(self):
        t = kernel.PairTables(5)
        assert t.mask_to_edges((1 << 0) | (1 << 9)) == [(1, 2), (4, 5)]
        assert t.rot[t.index[0, 4]] == t.index[0, 1]

    def test_rejects_large_n(self):
        with pytest.raises(ValueError):
            kernel.PairTables(12)

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_per_tree_agreement(self, n):
        """The kernel's tree-by-tree decisions add up to the Python ones."""
        totals = scan(n, check_genus=True, collect=kernel.COLLECT_ALL)
        py_one = sum(1 for T in all_trees(n) if is_genus_one(T))
        py_faces = sum(1 for T in all_trees(n) if genus(T) == 1)
        assert totals.stats[kernel.GENUS_ONE] == py_one
        assert totals.stats[kernel.GENUS_ONE_BY_FACES] == py_faces
        assert totals.stats[kernel.MISMATCH] == 0
        tables = kernel.PairTables(n)
        reps = {canonicalize(CircleGraph(n, tuple(tables.mask_to_edges(m)))).key() for m, _ in totals.reps}
        py_classes = {canonicalize(T).key() for T in all_trees(n) if is_genus_one(T)}
        assert reps == py_classes


class TestCountF:
    def test_examples(self):
        assert count_f(3).f_n == 0
        assert count_f(4).f_n == 4
        assert count_f(5).f_n % 5 == 0

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_matches_python_engine(self, n):
        assert count_f(n).f_n == count_f_python(n)

    def test_bounds(self):
        with pytest.raises(DomainError):
            count_f(2)
        with pytest.raises(DomainError):
            count_f(12, slow=True)
        with pytest.raises(DomainError):
            count_f(9)
        with pytest.raises(DomainError):
            count_f(10, slow=True, by_form=True)

    @pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
    def test_orbit_identity(self, n):
        r = count_f(n, by_form=True)
        assert sum(p * c for p, c in r.orbit_periods.items()) == r.f_n
        assert set(r.orbit_periods) <= {n, n // 2}
        assert sum(r.by_form.values()) == r.f_n
        assert r.f_mod_n == 0

    def test_half_period_classes_at_six(self):
        r = count_f(6, by_form=True)
        assert r.orbit_periods == {3: 2, 6: 126}
        assert r.half_period_forms == {"T3^2[2]": 1, "T3^2[3]": 1}

    def test_worker_count_does_not_matter(self):
        runs = [count_f(7, jobs=j, by_form=True) for j in (1, 4, 16)]
        assert len({(r.f_n, tuple(sorted(r.orbit_periods.items())), tuple(r.by_form.items())) for r in runs}) == 1

    def test_shards_partition_pruefer_space(self):
        for n in (5, 9, 10):
            prefixes = shard_prefixes(n)
            assert len(set(prefixes)) == len(prefixes)
            length = len(prefixes[0])
            assert sorted(prefixes) == list(itertools.product(range(n), repeat=length))

    def test_sharded_equals_single_shard(self):
        n = 7
        t = kernel.PairTables(n)
        whole = np.zeros(4, dtype=np.int64)
        for prefix in shard_prefixes(n):
            whole += kernel.scan_shard(n, np.array(prefix, dtype=np.int64), t.cross, t.index, t.rot, t.pa, t.pb, False, 0)[0]
        unsharded = kernel.scan_shard(n, np.zeros(0, dtype=np.int64), t.cross, t.index, t.rot, t.pa, t.pb, False, 0)[0]
        assert (whole == unsharded).all()


class TestLCount:
    def test_cross_tree(self):
        assert l_count(CROSS_TREE) == 4

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            l_count(GENUS_TWO)

    @pytest.mark.parametrize("n", [5, 7])
    def test_odd_n_full_period(self, n):
        assert all(l_count(T) == n for T in all_trees(n) if is_genus_one(T))

    def test_matches_labelings(self):
        for T in all_trees(6):
            if is_genus_one(T):
                labelings = {rotate(T, r).edges for r in range(6)}
                assert l_count(T) == len(labelings) == min_period(T)


class TestPn:
    def test_six(self):
        assert count_P_n(6) == 0

    def test_wrong_residue(self):
        with pytest.raises(DomainError):
            count_P_n(8)


class TestCache:
    def test_round_trip(self, tmp_path):
        r = count_f(6, cache_dir=tmp_path)
        assert (tmp_path / "census.csv").read_text().splitlines()[0] == ",".join(CACHE_HEADER)
        again = count_f(6, cache_dir=tmp_path)
        assert again.from_cache and again.f_n == r.f_n and again.p_n == r.p_n
        assert again.orbit_periods is None

    def test_env_var(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CIRCLE_GENUS_CACHE", str(tmp_path))
        count_f(5)
        assert 5 in read_cache(tmp_path)

    def test_stale_kernel_version_ignored(self, tmp_path):
        (tmp_path / "census.csv").write_text(",".join(CACHE_HEADER) + "\n6,1,1,0,stale\n")
        r = count_f(6, cache_dir=tmp_path)
        assert not r.from_cache and r.f_n == 762
        assert read_cache(tmp_path)[6]["f_n"] == "762"


def test_verify_suite_fast_range():
    report = verify_suite(7)
    assert report.passed, [c for c in report.checks if not c.passed]
    claims = {c.claim for c in report.checks}
    assert "e-graph structure and e-reduction properties" in claims


@pytest.mark.slow
def test_verify_suite_slow(tmp_path):
    report = verify_suite(10, slow=True, jobs=4, cache_dir=tmp_path)
    assert report.passed, [c for c in report.checks if not c.passed]
    rows = read_cache(tmp_path)
    assert rows[9]["f_mod_n"] == "0"
    assert rows[10]["f_mod_n"] == "5"
