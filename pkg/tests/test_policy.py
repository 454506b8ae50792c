"""Preference-table ranking, selection, and aggregation."""

import json

import pytest

import oracles
from pgx.explain import COLUMN_ORDER, Explanation, ExplanationType
from pgx.policy import (
    PolicyTable,
    aggregate,
    default_table,
    load_policy,
    rank_types,
    save_policy,
    select,
    uniform_weights,
)
from pgx.question import QuestionType

E = ExplanationType
Q = QuestionType

ARGMAX = {
    Q.WH_X: E.GAMMA,
    Q.WH_X1_NOT_X2: E.DISCOURSE,
    Q.WH_X_NOT_Y: E.ALPHA,
    Q.WH_NOT_Y: E.COUNTERFACTUAL,
    Q.NOT_X: E.COUNTERFACTUAL,
    Q.NOT_X1_BUT_X2: E.COUNTERFACTUAL,
    Q.NOT_X_BUT_Y: E.COUNTERFACTUAL,
    Q.DO_X_NOT_Y: E.DISCOURSE,
    Q.DO_NOT_X: E.COUNTERFACTUAL,
    Q.DO_X1_NOT_X2: E.COUNTERFACTUAL,
}


def feasible(etype: E) -> Explanation:
    return Explanation(etype=etype, evidence=(), text="ok", feasible=True, reason="")


def infeasible(etype: E) -> Explanation:
    return Explanation(etype=etype, evidence=(), text="", feasible=False, reason="nope")


class TestDefaultTable:
    def test_rows_match_bundled_study_values(self):
        table = default_table()
        for qname, row in oracles.TABLE_ROWS.items():
            got = table.row(Q(qname))
            assert [got[E(c)] for c in oracles.COLUMNS] == pytest.approx(row)

    def test_all_rows_and_columns_present(self):
        table = default_table()
        assert set(table.matrix) == set(Q)
        for row in table.matrix.values():
            assert set(row) == set(E)


class TestRanking:
    def test_wh_x_full_ranking(self):
        assert rank_types(default_table(), Q.WH_X) == [
            E.GAMMA, E.ALPHA, E.COUNTERFACTUAL, E.BETA, E.COMMON_SENSE, E.DISCOURSE,
        ]

    def test_do_x_not_y_tie_break(self):
        # three-way tie at 3.8 resolves in column order
        assert rank_types(default_table(), Q.DO_X_NOT_Y) == [
            E.DISCOURSE, E.GAMMA, E.BETA, E.COUNTERFACTUAL, E.COMMON_SENSE, E.ALPHA,
        ]

    def test_uniform_row_falls_back_to_column_order(self):
        table = PolicyTable(matrix={q: {e: 1.0 for e in E} for q in Q})
        assert rank_types(table, Q.WH_X) == list(COLUMN_ORDER)

    @pytest.mark.parametrize("qtype", list(Q), ids=[q.value for q in Q])
    def test_ranking_is_a_permutation(self, qtype):
        ranked = rank_types(default_table(), qtype)
        assert sorted(ranked, key=lambda e: e.value) == sorted(E, key=lambda e: e.value)

    @pytest.mark.parametrize("qtype", list(Q), ids=[q.value for q in Q])
    def test_row_argmax(self, qtype):
        assert rank_types(default_table(), qtype)[0] is ARGMAX[qtype]


class TestSelect:
    def test_first_feasible_wins(self):
        candidates = {e: feasible(e) for e in E}
        sel = select(default_table(), Q.WH_X, candidates)
        assert sel.etype is E.GAMMA

    def test_fallback_past_infeasible(self):
        candidates = {e: feasible(e) for e in E}
        candidates[E.GAMMA] = infeasible(E.GAMMA)
        sel = select(default_table(), Q.WH_X, candidates)
        assert sel.etype is E.ALPHA
        assert (E.GAMMA, "nope") in sel.attempts

    def test_counterfactual_tops_wh_not_y(self):
        candidates = {e: feasible(e) for e in E}
        sel = select(default_table(), Q.WH_NOT_Y, candidates)
        assert sel.etype is E.COUNTERFACTUAL

    def test_all_infeasible_names_every_attempt(self):
        candidates = {e: infeasible(e) for e in E}
        sel = select(default_table(), Q.WH_X, candidates)
        assert sel.etype is None
        assert sel.no_evidence
        assert len(sel.attempts) == 6
        for e in E:
            assert e.value in sel.text

    def test_rescaled_row_selects_identically(self):
        table = default_table()
        scaled = PolicyTable(
            matrix={
                q: {e: v * 7.0 for e, v in row.items()}
                for q, row in table.matrix.items()
            }
        )
        candidates = {e: feasible(e) for e in E}
        candidates[E.GAMMA] = infeasible(E.GAMMA)
        for q in Q:
            assert rank_types(table, q) == rank_types(scaled, q)
            assert select(table, q, candidates).etype is select(scaled, q, candidates).etype


class TestAggregate:
    def test_uniform_means_match_exact_arithmetic(self):
        got = aggregate(default_table(), uniform_weights())
        want = oracles.uniform_column_means()
        for e, expected in zip(COLUMN_ORDER, want):
            assert got[e] == pytest.approx(expected, abs=1e-9)

    def test_structural_explanations_exceed_thirty_percent(self):
        got = aggregate(default_table(), uniform_weights())
        assert got[E.ALPHA] + got[E.BETA] + got[E.GAMMA] > 30

    def test_degenerate_weight_returns_the_row(self):
        weights = {q: 0.0 for q in Q}
        weights[Q.WH_X] = 1.0
        got = aggregate(default_table(), weights)
        assert got == default_table().row(Q.WH_X)

    def test_linear_in_weights(self):
        table = default_table()
        w1 = {q: 0.0 for q in Q}
        w1[Q.WH_X] = 1.0
        w2 = {q: 0.0 for q in Q}
        w2[Q.NOT_X] = 1.0
        mixed = {q: 0.5 * w1[q] + 0.5 * w2[q] for q in Q}
        a, b, m = aggregate(table, w1), aggregate(table, w2), aggregate(table, mixed)
        for e in E:
            assert m[e] == pytest.approx(0.5 * a[e] + 0.5 * b[e])

    def test_output_within_column_bounds(self):
        got = aggregate(default_table(), uniform_weights())
        for j, e in enumerate(COLUMN_ORDER):
            column = [row[j] for row in oracles.TABLE_ROWS.values()]
            assert min(column) <= got[e] <= max(column)

    def test_bad_weight_sum_rejected(self):
        weights = {q: 0.2 for q in Q}
        with pytest.raises(ValueError):
            aggregate(default_table(), weights)

    def test_negative_weight_rejected(self):
        weights = uniform_weights()
        weights[Q.WH_X] = -0.1
        weights[Q.NOT_X] += 0.2
        with pytest.raises(ValueError):
            aggregate(default_table(), weights)


class TestPolicyFiles:
    def test_save_load_roundtrip(self):
        table = default_table()
        again = load_policy(save_policy(table))
        assert again.matrix == table.matrix

    def test_missing_row_rejected(self):
        doc = json.loads(save_policy(default_table()))
        del doc["WH_X"]
        with pytest.raises(ValueError):
            load_policy(json.dumps(doc))

    def test_missing_column_rejected(self):
        doc = json.loads(save_policy(default_table()))
        del doc["WH_X"]["alpha"]
        with pytest.raises(ValueError):
            load_policy(json.dumps(doc))

    def test_unknown_key_rejected(self):
        doc = json.loads(save_policy(default_table()))
        doc["WH_Z"] = doc["WH_X"]
        with pytest.raises(ValueError):
            load_policy(json.dumps(doc))

    def test_negative_weight_rejected(self):
        doc = json.loads(save_policy(default_table()))
        doc["WH_X"]["alpha"] = -1
        with pytest.raises(ValueError):
            load_policy(json.dumps(doc))
