import itertools
from fractions import Fraction

import pytest

from coopstore.entropy import entropy_symbols
from coopstore.errors import InvalidEveModel, InvalidL, LemmaViolation, NonIntegralParams
from coopstore.eve import (
    NOT_COVERED,
    EveModel,
    bandwidth_comparison,
    capacity_table,
    leakage_observations,
    leakage_report,
    lemma_suite,
    measured_secrecy_capacity,
    predicted_secrecy_capacity,
    specific_verifications,
)
from coopstore.field import prime_field
from coopstore.instances import a1, b1, s1
from coopstore.legacy import CodeAAdapter
from coopstore.stable import CodeParams, StableCode

S1_TABLE = {(0, 0): 6, (1, 0): 4, (2, 0): 2, (0, 1): 2, (1, 1): 1, (0, 2): 0}


class TestLeakageObservations:
    def test_empty_model(self):
        code = s1()
        obs = leakage_observations(code, EveModel())
        assert len(obs) == 0
        assert measured_secrecy_capacity(code, EveModel()) == 6

    def test_single_f_leaks_four(self):
        # alpha + (k-1) * l2 * beta = 2 + 2 = 4
        code = s1()
        for f in range(1, 7):
            obs = leakage_observations(code, EveModel(F=(f,)))
            assert entropy_symbols(obs) == 4

    def test_context_enumeration_is_exhaustive(self):
        code = s1()
        obs = leakage_observations(code, EveModel(F=(1,)))
        # C(n-1, t-1) * C(n-t, d) contexts, each d repair + (t-1) exchange rows
        assert len(obs) == 5 * 4 * (3 + 1)

    def test_code_b_node_t_leaks_everything(self):
        code = b1()
        obs = leakage_observations(code, EveModel(F=(2,)))
        assert entropy_symbols(obs) == 6

    def test_code_b_vulnerable_and_edge_nodes(self):
        code = b1()
        for node in (2, 3, 4, 5):
            assert measured_secrecy_capacity(code, EveModel(F=(node,))) == 0
        for node in (1, 6):  # position never changes at the extremes
            assert measured_secrecy_capacity(code, EveModel(F=(node,))) == 2

    def test_code_a_node_one_zero_capacity(self):
        adapter = CodeAAdapter(a1())
        assert measured_secrecy_capacity(adapter, EveModel(F=(1,))) == 0

    def test_code_a_unsupported_node_rejected(self):
        adapter = CodeAAdapter(a1())
        with pytest.raises(InvalidEveModel):
            leakage_observations(adapter, EveModel(F=(2,)))

    def test_eve_union_bound(self):
        code = s1()
        with pytest.raises(InvalidEveModel):
            leakage_observations(code, EveModel(E=(1, 2), F=(3,)))

    def test_overlap_rejected(self):
        with pytest.raises(InvalidEveModel):
            EveModel(E=(1,), F=(1,))

    def test_monotone_in_nodes(self):
        code = s1()
        base = entropy_symbols(leakage_observations(code, EveModel(F=(3,))))
        more_e = entropy_symbols(leakage_observations(code, EveModel(E=(5,), F=(3,))))
        more_f = entropy_symbols(leakage_observations(code, EveModel(F=(3, 4))))
        assert more_e >= base and more_f >= base


class TestPredictedCapacity:
    def test_table_values(self):
        p = s1().params
        for (l1, l2), expect in S1_TABLE.items():
            assert predicted_secrecy_capacity(p, l1, l2) == expect

    def test_eq57_form(self):
        p = CodeParams.mscr(n=7, k=3, d=4, t=2, q=11)
        # (k - l1 - l2)(d - k + t - l2) * beta
        assert predicted_secrecy_capacity(p, 1, 1) == 1 * 2 * 1

    def test_no_adversary_gives_b(self):
        p = s1().params
        assert predicted_secrecy_capacity(p, 0, 0) == p.B

    def test_not_covered_regime(self):
        # t > k but d != k
        p = CodeParams.mscr(n=7, k=2, d=4, t=3, q=11)
        assert predicted_secrecy_capacity(p, 0, 1) is NOT_COVERED

    def test_t_greater_k_with_d_equals_k_covered(self):
        p = CodeParams.mscr(n=5, k=2, d=2, t=3, q=11)
        assert predicted_secrecy_capacity(p, 0, 1) == (2 - 1) * (3 - 1)

    def test_invalid_l(self):
        p = s1().params
        with pytest.raises(InvalidL):
            predicted_secrecy_capacity(p, 2, 1)


class TestCapacityTable:
    def test_s1_exhaustive_match(self):
        code = s1()
        cells = capacity_table(code)
        assert cells
        seen = set()
        for cell in cells:
            assert cell.measured == S1_TABLE[(cell.l1, cell.l2)] == cell.predicted
            seen.add((cell.l1, cell.l2))
        assert seen == set(S1_TABLE)

    def test_placement_counts(self):
        code = s1()
        cells = capacity_table(code)
        by_pair = {}
        for c in cells:
            by_pair.setdefault((c.l1, c.l2), 0)
            by_pair[(c.l1, c.l2)] += 1
        assert by_pair[(0, 0)] == 1
        assert by_pair[(1, 0)] == 6
        assert by_pair[(2, 0)] == 15
        assert by_pair[(0, 1)] == 6
        assert by_pair[(1, 1)] == 30
        assert by_pair[(0, 2)] == 15

    def test_capacity_from_single_helper_entropy(self):
        # measured == (k - l1 - l2)(alpha - H(S_g^F)) for any g in G
        code = s1()
        from coopstore.eve import _nominal_repair_rows, _obs

        for f_set in itertools.combinations(range(1, 7), 1):
            for e_set in itertools.combinations([x for x in range(1, 7) if x not in f_set], 1):
                eve = EveModel(E=e_set, F=f_set)
                rest = [x for x in range(1, 7) if x not in e_set + f_set]
                g = rest[0]
                h_g = entropy_symbols(_obs(code, _nominal_repair_rows(code, [g], f_set)))
                expect = (3 - 2) * (2 - h_g)
                assert measured_secrecy_capacity(code, eve) == expect


class TestLemmaSuite:
    def test_s1_all_pass(self):
        res = lemma_suite(s1())
        assert res.all_passed, res.summary()
        assert res.checks["group_volume"].checked == 180
        assert res.checks["member_volume"].checked == 360
        assert res.checks["helper_uniformity"].checked == 21
        res.raise_if_failed()

    def test_l2_specific_subset_full_rank(self):
        # rank of repair data toward C={1,2} from A={3}, B={4,5} is dt*beta=6
        code = s1()
        from coopstore.eve import _ctx_repair_rows, _obs

        rows = _ctx_repair_rows(code, (3, 4, 5), (1, 2), (1, 2), (3, 4, 5))
        assert entropy_symbols(_obs(code, rows)) == 6

    def test_code_b_l4_l5_fail_with_witness(self):
        res = lemma_suite(b1())
        assert res.checks["group_volume"].passed
        assert res.checks["member_volume"].passed
        assert not res.checks["traversal_span"].passed
        assert not res.checks["helper_uniformity"].passed
        assert res.checks["traversal_span"].witness is not None
        assert res.checks["helper_uniformity"].witness is not None
        with pytest.raises(LemmaViolation):
            res.raise_if_failed()

    def test_helper_uniformity_regime_t_greater_than_k(self):
        # the t >= k, d = k regime on a non-default instance
        params = CodeParams.mscr(n=5, k=2, d=2, t=3, q=11)
        code = StableCode.create(params, prime_field(11))
        res = lemma_suite(code)
        assert res.all_passed, res.summary()
        assert "group_volume" not in res.checks or res.checks["group_volume"].checked == 0


class TestSpecificVerifications:
    @pytest.mark.parametrize("l1,l2", [(0, 1), (1, 1), (0, 2)])
    def test_s1_canonical_placements(self, l1, l2):
        res = specific_verifications(s1(), l1, l2)
        assert res.all_passed, res.summary()

    def test_invalid_l(self):
        with pytest.raises(InvalidL):
            specific_verifications(s1(), 0, 3)


class TestBandwidthComparison:
    def test_s1_values(self):
        msr, mscr = bandwidth_comparison(6, 3, 3, 2, 6)
        assert (msr, mscr) == (Fraction(12), Fraction(8))

    def test_t1_equal(self):
        msr, mscr = bandwidth_comparison(6, 3, 4, 1, 6)
        assert msr == mscr

    def test_fractional_msr_total(self):
        msr, mscr = bandwidth_comparison(8, 2, 4, 2, 8)
        assert msr == Fraction(32, 3)
        assert mscr == Fraction(10)
        assert mscr < msr

    def test_non_mscr_point_rejected(self):
        with pytest.raises(NonIntegralParams):
            bandwidth_comparison(6, 3, 3, 2, 7)


class TestStorageRecoverability:
    def test_full_downloads_determine_storage(self):
        # H(W_i | tilde S^i) = 0 for every node of S1
        from coopstore.entropy import conditional_entropy, observations
        from coopstore.eve import repair_download_rows

        code = s1()
        for i in range(1, 7):
            w_i = observations(code.field, 6, code.storage_rows(i))
            tilde = observations(code.field, 6, repair_download_rows(code, i))
            assert conditional_entropy(w_i, tilde) == 0

    def test_repair_data_alone_does_not(self):
        # the caveat that separates cooperative codes from single-repair
        # ones: H(W_i | S^i) > 0 here, so the suite must never assert it zero
        from coopstore.entropy import conditional_entropy, observations
        from coopstore.eve import _nominal_repair_rows

        code = s1()
        nodes = list(range(1, 7))
        for i in nodes:
            w_i = observations(code.field, 6, code.storage_rows(i))
            s_i = observations(code.field, 6, _nominal_repair_rows(code, nodes, [i]))
            assert conditional_entropy(w_i, s_i) == 1


def test_leakage_report_shape():
    code = s1()
    rep = leakage_report(code, EveModel(F=(1,)))
    assert rep.leaked_symbols == 4
    assert rep.measured_capacity == 2 == rep.predicted_capacity
    assert rep.measured_capacity == code.params.B - rep.leaked_symbols
    assert len(rep.observations) == 80
