import math

import numpy as np
import pytest
from pydantic import ValidationError

from game.errors import HandSizeError
from game.hand_eval import is_winning
from game.shaping import ShapingParams, potential, shangting, shaped_value, shaping_reward, unscented_bonus
from game.tiles import NUM_KINDS, GameState, apply, deal, discard_tile, draw_tile, parse_hand, parse_tile, sample_draw

from conftest import BLIND_SPOT_HAND, JUNK_HAND, WINNING_HAND

BONUS_HAND = "E E E S S 1m 2m 3m 4m 5m 6m 7m 1p 2p"


# === 向听 ===

def test_shangting_examples():
    assert shangting(parse_hand(WINNING_HAND)) == 0
    assert shangting(parse_hand(JUNK_HAND)) == -14


def test_shangting_greedy_blind_spot():
    hand = parse_hand(BLIND_SPOT_HAND)
    assert shangting(hand) == -2
    assert is_winning(hand)


def test_shangting_counts_only_first_pair():
    # 三对: 只有第一对计分
    assert shangting(parse_hand("1m 1m 5p 5p 9s 9s E S W N RD GD WD 2m")) == -12


def test_shangting_requires_fourteen_tiles():
    with pytest.raises(HandSizeError):
        shangting(parse_hand("1m 2m 3m"))


def test_shangting_range_on_random_hands():
    for seed in range(500):
        assert -14 <= shangting(deal(seed).hand) <= 0


# === 加成 ===

def test_unscented_bonus_examples():
    assert unscented_bonus(parse_hand(BONUS_HAND)) == pytest.approx(3 + 1 + 3 * 7 / 9)
    assert unscented_bonus(parse_hand("1m 1m 1m 2m 3m 4m 4m 5m 6m 6m 7m 8m 9m 9m")) == pytest.approx(3)


def test_unscented_bonus_ignores_second_honor_pair():
    hand = parse_hand("E E S S 1m 2m 3m 4m 5m 6m 7m 8m 9m 9m")
    assert unscented_bonus(hand) == pytest.approx(0 + 1 + 3)


def test_unscented_bonus_all_honors():
    hand = parse_hand("E E E S S S W W W N N N RD RD")
    assert unscented_bonus(hand) == pytest.approx(12 + 1 + 3)


def test_honor_triplet_is_not_a_pair():
    # 东 x4 计刻子, 剩余一张不构成对子
    hand = parse_hand("E E E E 1m 2m 3m 4m 5m 6m 7m 8m 9m 9m")
    assert unscented_bonus(hand) == pytest.approx(3 + 0 + 3)


# === 势函数 ===

def test_shaped_value_weight_zero_is_shangting():
    for seed in range(50):
        hand = deal(seed).hand
        value = shaped_value(hand, ShapingParams(weight=0))
        assert value.combined == value.shangting == shangting(hand)


def test_shaped_value_weighted():
    hand = parse_hand(BONUS_HAND)
    value = shaped_value(hand, ShapingParams(weight=1.2))
    assert value.combined == pytest.approx(value.shangting + 7.6)


def test_shaped_value_is_linear_in_weight():
    hand = deal(8).hand
    v1 = shaped_value(hand, ShapingParams(weight=0.5))
    v2 = shaped_value(hand, ShapingParams(weight=1.0))
    assert v2.combined - v2.shangting == pytest.approx(2 * (v1.combined - v1.shangting))
    assert v1.shangting == v2.shangting
    assert v2.combined >= v1.combined


@pytest.mark.parametrize("kwargs", [{"weight": -1}, {"weight": math.inf}, {"base_payoff": 0}, {"weight": math.nan}])
def test_shaping_params_validation(kwargs):
    with pytest.raises(ValidationError):
        ShapingParams(**kwargs)


# === 塑形奖励 ===

def test_shaping_reward_same_kind_redraw_is_zero(make_state):
    s = make_state(JUNK_HAND)
    s_next = apply(s, parse_tile("E"), parse_tile("E"))
    assert shaping_reward(s, s_next, ShapingParams(weight=1.2)) == 0


def test_shaping_reward_matches_value_difference(random_midgame_states):
    params = ShapingParams(weight=0.75)
    for s in random_midgame_states(30, seed=2):
        held = next(k for k in range(NUM_KINDS) if s.hand[k])
        after = discard_tile(s, held)
        s_next = draw_tile(after, sample_draw(after, 0))
        if is_winning(s_next.hand):
            continue
        expected = shaped_value(s_next.hand, params).combined - shaped_value(s.hand, params).combined
        assert shaping_reward(s, s_next, params) == pytest.approx(expected)


def test_shaping_reward_improvement_by_one(make_state):
    # 打出孤张 RD, 摸入 3m 凑成 123m
    s = make_state("1m 2m 5m 1p 4p 7p 1s 4s 7s E S W N RD")
    s_next = apply(s, parse_tile("RD"), parse_tile("3m"))
    params = ShapingParams(weight=0)
    assert shangting(s.hand) == -14
    assert shangting(s_next.hand) == -11
    assert shaping_reward(s, s_next, params) == 3


def test_shaping_reward_winning_pays_total(make_state):
    s = make_state("1m 1m 1m 2m 2m 2m 3p 4p 5p 7s 8s 9s E S")
    s_next = apply(s, parse_tile("S"), parse_tile("E"))
    reward = shaping_reward(s, s_next, ShapingParams(weight=0, base_payoff=2))
    assert reward == 12


def _trajectory(seed: int) -> list[GameState]:
    """随机打牌直到和牌前一步或牌墙摸空, 轨迹中不含和牌状态"""
    rng = np.random.default_rng(seed)
    state = deal(seed)
    states = [state]
    while state.wall_size:
        held = [k for k in range(NUM_KINDS) if state.hand[k]]
        after = discard_tile(state, held[int(rng.integers(len(held)))])
        nxt = draw_tile(after, sample_draw(after, seed))
        if is_winning(nxt.hand):
            break
        states.append(nxt)
        state = nxt
    return states


@pytest.mark.parametrize("weight", [0.0, 1.2])
def test_shaping_rewards_telescope(weight):
    params = ShapingParams(weight=weight)
    for seed in range(100):
        states = _trajectory(seed)
        if is_winning(states[0].hand):
            continue
        total = sum(shaping_reward(s, t, params) for s, t in zip(states, states[1:]))
        expected = shaped_value(states[-1].hand, params).combined - shaped_value(states[0].hand, params).combined
        if weight == 0:
            assert total == expected
        else:
            assert total == pytest.approx(expected, abs=1e-9)


def test_potential_matches_shaped_value():
    params = ShapingParams(weight=0.75)
    for seed in range(30):
        hand = deal(seed).hand
        assert potential(hand, 0.75) == shaped_value(hand, params).combined
