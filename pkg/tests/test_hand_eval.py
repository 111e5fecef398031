import numpy as np
import pytest

from game.errors import ConfigError, HandSizeError, NotWinningError
from game.hand_eval import (
    DEFAULT_SCORE_RULES, Run, ScoreRules, Triplet,
    decompose, exact_shangting_oracle, is_winning, iter_decompositions,
    load_score_rules, multiplier, payoff, score_hand,
)
from game.shaping import shangting
from game.tiles import ALL_KINDS, NUM_KINDS, NUM_SUITED, Suit, counts_from_tiles, parse_hand, parse_tile

from conftest import BLIND_SPOT_HAND, JUNK_HAND, WINNING_HAND


def _random_winning_hand(rng: np.random.Generator) -> tuple[int, ...]:
    """随机拼出 4 组面子 + 1 对将, 不超过每种 4 张"""
    while True:
        counts = [0] * NUM_KINDS
        for _ in range(4):
            if rng.random() < 0.5:
                k = int(rng.integers(NUM_KINDS))
                counts[k] += 3
            else:
                suit = int(rng.integers(3))
                start = suit * 9 + int(rng.integers(7))
                for d in range(3):
                    counts[start + d] += 1
        counts[int(rng.integers(NUM_KINDS))] += 2
        if max(counts) <= 4:
            return tuple(counts)


def _random_hand(rng: np.random.Generator) -> tuple[int, ...]:
    picks = rng.choice(136, size=14, replace=False)
    return tuple(int(c) for c in np.bincount(picks // 4, minlength=NUM_KINDS))


# === 和牌判定 ===

def test_is_winning_examples():
    assert is_winning(parse_hand(WINNING_HAND))
    assert not is_winning(parse_hand(JUNK_HAND))
    assert is_winning(parse_hand(BLIND_SPOT_HAND))


def test_is_winning_requires_fourteen_tiles():
    with pytest.raises(HandSizeError):
        is_winning(parse_hand("1m 1m"))


def test_four_of_a_kind_is_not_a_set():
    # 1m x4 只能拆成刻子 + 1 张
    assert not is_winning(parse_hand("1m 1m 1m 1m 3p 4p 5p 7s 8s 9s E E E S"))
    assert is_winning(parse_hand("1m 1m 1m 1m 2m 3m 3p 4p 5p 7s 8s 9s E E"))


def test_runs_do_not_wrap_or_use_honors():
    assert not is_winning(parse_hand("8m 9m 1p 1m 1m 1m 3p 4p 5p 7s 8s 9s E E"))
    assert not is_winning(parse_hand("E S W 1m 1m 1m 3p 4p 5p 7s 8s 9s N N"))


# === 拆解 ===

def test_decompose_canonical_for_blind_spot():
    """将牌从小到大尝试, 第一种拆解为 1m 作将"""
    decomposition = decompose(parse_hand(BLIND_SPOT_HAND))
    assert decomposition is not None
    assert decomposition.pair == parse_tile("1m")
    assert [str(s) for s in decomposition.sets] == ["123m", "234m", "234m", "345m"]
    assert decomposition.counts() == parse_hand(BLIND_SPOT_HAND)


def test_iter_decompositions_contains_triplet_reading():
    readings = {str(d) for d in iter_decompositions(parse_hand(BLIND_SPOT_HAND))}
    assert "111m 222m 333m 345m + 4mx2" in readings
    assert "123m 234m 234m 345m + 1mx2" in readings


def test_decompose_non_winning_is_none():
    assert decompose(parse_hand(JUNK_HAND)) is None
    assert list(iter_decompositions(parse_hand(JUNK_HAND))) == []


def test_decompose_run_heavy_hand():
    hand = parse_hand("2m 2m 3m 3m 4m 4m 5m 5m 6m 6m 7m 7m 8m 8m")
    decomposition = decompose(hand)
    assert decomposition is not None
    assert decomposition.counts() == hand
    assert all(isinstance(s, Run) for s in decomposition.sets)


def test_decomposition_sets_are_well_formed():
    rng = np.random.default_rng(2)
    for _ in range(200):
        hand = _random_winning_hand(rng)
        for decomposition in iter_decompositions(hand):
            assert len(decomposition.sets) == 4
            assert decomposition.counts() == hand
            for tile_set in decomposition.sets:
                if isinstance(tile_set, Run):
                    assert tile_set.suit.is_suited and tile_set.start_rank <= 7


# === 计分 ===

def test_score_plain_hand():
    score = score_hand(parse_hand(WINNING_HAND), 2)
    assert score.multiplier == 1
    assert score.items == []
    assert (score.individual_payoff, score.total_payoff) == (4, 12)


def test_score_full_flush():
    score = score_hand(parse_hand("1m 1m 1m 2m 3m 4m 4m 5m 6m 6m 7m 8m 9m 9m"), 2)
    assert score.multiplier == 5
    assert score.items == [("full_flush", 4)]
    assert score.total_payoff == 192


def test_score_half_flush_with_honor_triplets():
    score = score_hand(parse_hand("E E E GD GD GD 1m 2m 3m 4m 5m 6m 7m 7m"), 2)
    assert score.multiplier == 5
    assert sorted(score.items) == [("dragon_triplet", 1), ("half_flush", 2), ("wind_triplet", 1)]


def test_score_takes_best_decomposition():
    # 111m 222m 333m 可读作三组刻子或三组顺子; 全刻子读法更高
    hand = parse_hand("1m 1m 1m 2m 2m 2m 3m 3m 3m 5p 5p 5p 9s 9s")
    assert multiplier(hand) == 1 + DEFAULT_SCORE_RULES.all_triplets


def test_score_all_honors():
    hand = parse_hand("E E E S S S W W W N N N RD RD")
    score = score_hand(hand, 2)
    assert score.multiplier == 1 + 4 + 2 + 3
    assert ("all_honors", 3) in score.items


def test_score_rejects_non_winning_hand():
    with pytest.raises(NotWinningError):
        score_hand(parse_hand(JUNK_HAND), 2)


def test_multiplier_unchanged_under_suit_permutation():
    rng = np.random.default_rng(4)
    for _ in range(100):
        hand = _random_winning_hand(rng)
        rotated = hand[9:18] + hand[18:27] + hand[0:9] + hand[NUM_SUITED:]
        assert multiplier(hand) == multiplier(rotated)


def test_payoff():
    assert payoff(1, 2) == (4, 12)
    assert payoff(7, 2) == (256, 768)
    with pytest.raises(ValueError):
        payoff(0, 2)
    with pytest.raises(ValueError):
        payoff(1, 0)


# === 番数表 ===

def test_load_score_rules_from_file(tmp_path):
    path = tmp_path / "rules.env"
    path.write_text("# 自定义\nFULL_FLUSH=6\nALL_HONORS=5\n", encoding="utf-8")
    rules = load_score_rules(path)
    assert rules.full_flush == 6
    assert rules.all_honors == 5
    assert rules.base == 1
    full_flush = parse_hand("1m 1m 1m 2m 3m 4m 4m 5m 6m 6m 7m 8m 9m 9m")
    assert multiplier(full_flush, rules) == 7


def test_load_score_rules_missing_file_uses_defaults(tmp_path):
    assert load_score_rules(tmp_path / "missing.env") == DEFAULT_SCORE_RULES


def test_bundled_score_rules_match_defaults():
    assert load_score_rules() == DEFAULT_SCORE_RULES


@pytest.mark.parametrize("content", ["UNKNOWN_RULE=1\n", "FULL_FLUSH=many\n", "BASE=0\n"])
def test_load_score_rules_rejects_bad_file(tmp_path, content):
    path = tmp_path / "rules.env"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ConfigError):
        load_score_rules(path)


def test_score_rules_accept_field_names():
    assert ScoreRules(full_flush=3).full_flush == 3


# === 穷举向听 ===

def test_oracle_examples():
    assert exact_shangting_oracle(parse_hand(BLIND_SPOT_HAND)) == 0
    assert exact_shangting_oracle(parse_hand(JUNK_HAND)) == -14
    assert exact_shangting_oracle(parse_hand(WINNING_HAND)) == 0


def test_oracle_agrees_with_is_winning_on_constructed_hands():
    rng = np.random.default_rng(0)
    for _ in range(1_000):
        hand = _random_winning_hand(rng)
        assert is_winning(hand)
        assert exact_shangting_oracle(hand) == 0


def test_oracle_agrees_with_is_winning_on_random_hands():
    rng = np.random.default_rng(1)
    for _ in range(2_000):
        hand = _random_hand(rng)
        assert is_winning(hand) == (exact_shangting_oracle(hand) == 0)


def test_greedy_never_exceeds_oracle():
    rng = np.random.default_rng(3)
    for _ in range(10_000):
        hand = _random_hand(rng)
        assert shangting(hand) <= exact_shangting_oracle(hand)


def test_set_labels():
    assert str(Triplet(ALL_KINDS[0])) == "111m"
    assert str(Triplet(parse_tile("RD"))) == "RDRDRD"
    assert str(Run(Suit.PIN, 3)) == "345p"
    assert Run(Suit.SOU, 1).tiles() == (18, 19, 20)
    assert counts_from_tiles(Run(Suit.MAN, 7).tiles())[6:9] == (1, 1, 1)
