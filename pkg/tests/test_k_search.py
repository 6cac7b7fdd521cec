"""
指数空间搜索单元测试

测试内容:
- 查找表与逐点计算一致
- 阶段1与逐点穷举一致
- 阶段2只会改进起点
- 参考四元组作为起点时的支配性
"""

import pytest
from pydantic import ValidationError

from app.models.config_model import SearchSettings
from app.models.enums import Objective
from app.models.exceptions import InvalidExponents
from app.models.state_model import ExponentQuad
from app.core.chmetrics import ch_q
from app.core.k_search import (
    ExponentTables,
    QuadScore,
    brute_force_search,
    coarse_search,
    k_search,
    refine,
)
from app.core.states import k_config, make_state
from app.cli.table1 import TABLE1_REFERENCE


SMALL = SearchSettings(coarse_kmax=6, full_kmax=64, refine_rounds=3)


class TestExponentTables:
    """查找表测试类"""

    @pytest.mark.parametrize("quad", [(1, 3, 3, 1), (2, 8, 8, 2), (4, 46, 23, 12), (1, 1, 1, 1)])
    def test_matches_pointwise(self, quad):
        """测试查找表的 (η, Q) 与 ch_q 一致"""
        state = make_state(0.9)
        tables = ExponentTables(state, 64)
        eta, q = tables.evaluate(*quad)
        report = ch_q(state, k_config(state, ExponentQuad(*quad)))
        assert float(q) == pytest.approx(report.q, abs=1e-13)
        if report.eta_crit is None:
            assert float(eta) == float("inf")
        else:
            assert float(eta) == pytest.approx(report.eta_crit, abs=1e-13)


class TestCoarseSearch:
    """阶段1测试类"""

    @pytest.mark.parametrize("ratio", [0.25, 0.6, 0.85])
    def test_matches_brute_force(self, ratio):
        """测试向量化穷举与逐点穷举一致"""
        state = make_state(ratio)
        fast = coarse_search(state, 5)[0]
        slow = brute_force_search(state, 5)
        assert fast.eta == pytest.approx(slow.eta, abs=1e-12)

    def test_keep_sorted(self):
        """测试返回的种子按排序键升序"""
        seeds = coarse_search(make_state(0.7), 6, keep=4)
        assert len(seeds) == 4
        assert [s.key for s in seeds] == sorted(s.key for s in seeds)


class TestRefine:
    """阶段2测试类"""

    def test_refine_never_worse(self):
        """测试细化结果不劣于起点"""
        state = make_state(0.9)
        tables = ExponentTables(state, 128)
        eta, q = tables.evaluate(1, 3, 3, 1)
        start = QuadScore((1, 3, 3, 1), float(eta), float(q))
        best = refine(tables, start, rounds=4)
        assert best.key <= start.key
        assert max(best.quad) <= 128

    def test_zero_rounds(self):
        """测试 refine_rounds = 0 时返回起点"""
        state = make_state(0.5)
        tables = ExponentTables(state, 16)
        eta, q = tables.evaluate(2, 8, 8, 2)
        start = QuadScore((2, 8, 8, 2), float(eta), float(q))
        assert refine(tables, start, rounds=0) == start


class TestKSearch:
    """完整搜索测试类"""

    def test_record(self):
        """测试返回记录的字段"""
        record = k_search(make_state(0.5), SMALL)
        assert record.objective == Objective.MIN_ETA
        assert record.k is not None
        assert max(record.k.as_tuple()) <= SMALL.full_kmax
        assert record.eta_crit is not None
        assert record.eta_crit > 2.0 / 3.0

    def test_dominates_coarse(self):
        """测试最终结果不劣于阶段1"""
        state = make_state(0.8)
        record = k_search(state, SMALL)
        coarse = coarse_search(state, SMALL.coarse_kmax)[0]
        assert record.eta_crit <= coarse.eta + 1e-12

    def test_seed_out_of_range(self):
        """测试超出 kmax 的起点被拒绝"""
        with pytest.raises(InvalidExponents):
            k_search(make_state(0.5), SMALL, seeds=[ExponentQuad(1, 100, 2, 2)])

    def test_maximally_entangled(self):
        """测试 α = β 时搜索不报错"""
        record = k_search(make_state(1.0), SMALL)
        assert record.k is not None
        assert record.eta_crit is None or record.eta_crit > 0.99

    @pytest.mark.parametrize("row", TABLE1_REFERENCE[:4], ids=lambda r: f"{r.ratio:.2f}")
    def test_reference_dominated(self, row):
        """测试以参考四元组为起点时 η 不高于参考值"""
        state = make_state(row.ratio)
        search = SearchSettings(coarse_kmax=8, full_kmax=64, refine_rounds=4)
        record = k_search(state, search, seeds=[row.quad])
        reference = ch_q(state, k_config(state, row.quad))
        assert record.eta_crit <= reference.eta_crit + 1e-12


class TestSearchSettings:
    """搜索参数测试类"""

    def test_coarse_above_full(self):
        """测试 coarse_kmax > full_kmax 被拒绝"""
        with pytest.raises(ValidationError):
            SearchSettings(coarse_kmax=64, full_kmax=32)

    def test_ceiling(self):
        """测试 full_kmax 上限"""
        with pytest.raises(ValidationError):
            SearchSettings(full_kmax=2048)
