import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gossipsim.fsa import (
    FsaProgram,
    Permutation,
    StateKind,
    compose_fsa,
    identity_permutation,
    parse_permutations,
    permutation_set,
    pipelined_permutation,
    random_permutation,
    validate_permutation,
)


def targets(p):
    return list(p.targets)


class TestIdentityPermutation:
    def test_middle_owner(self):
        assert targets(identity_permutation(2, 4)) == [0, 1, 3, 4]

    def test_first_owner(self):
        assert targets(identity_permutation(0, 4)) == [1, 2, 3, 4]

    def test_last_owner(self):
        assert targets(identity_permutation(4, 4)) == [0, 1, 2, 3]

    @pytest.mark.parametrize("i,n", [(-1, 4), (5, 4), (0, 0)])
    def test_rejects_bad_args(self, i, n):
        with pytest.raises(ValueError):
            identity_permutation(i, n)


class TestPipelinedPermutation:
    def test_wraparound(self):
        assert targets(pipelined_permutation(3, 5)) == [4, 5, 0, 1, 2]

    def test_zero_shift_equals_identity(self):
        assert targets(pipelined_permutation(0, 4)) == [1, 2, 3, 4]

    def test_full_wrap(self):
        assert targets(pipelined_permutation(4, 4)) == [0, 1, 2, 3]

    @given(st.integers(1, 40).flatmap(lambda n: st.tuples(st.just(n),
                                                          st.integers(0, n))))
    def test_rotation_of_identity(self, n_i):
        n, i = n_i
        ident = targets(identity_permutation(i, n))
        pipe = targets(pipelined_permutation(i, n))
        assert sorted(pipe) == ident
        # rotated left by the owner's position count within the cyclic order
        k = pipe.index(ident[0]) if ident else 0
        assert pipe[k:] + pipe[:k] == ident


class TestRandomPermutation:
    def test_deterministic(self):
        a = random_permutation(3, 12, seed=99)
        b = random_permutation(3, 12, seed=99)
        assert a == b

    def test_seed_changes_output(self):
        outs = {random_permutation(0, 12, seed=s).targets for s in range(40)}
        assert len(outs) > 30

    def test_single_choice(self):
        assert targets(random_permutation(0, 1, seed=12345)) == [1]

    def test_valid_for_any_seed(self):
        for seed in (0, 1, 2**63, 2**64 - 1, 31337):
            assert validate_permutation(random_permutation(5, 9, seed)) is None

    def test_position_uniformity_chi_square(self):
        # Frozen instance: owner 0, n=20, seeds 10001..20000.  Expected
        # position counts are uniform (500 per value); chi-square per
        # position (19 dof) must stay within 3 sigma, as must the
        # aggregate over all 20 positions (380 dof).
        n, owner = 20, 0
        seeds = range(10001, 20001)
        counts = [[0] * (n + 1) for _ in range(n)]
        for seed in seeds:
            p = random_permutation(owner, n, seed)
            for pos, v in enumerate(p.targets):
                counts[pos][v] += 1
        expected = 10000 / n
        per_pos = [
            sum((counts[pos][v] - expected) ** 2 / expected
                for v in range(n + 1) if v != owner)
            for pos in range(n)
        ]
        pos_bound = 19 + 3 * math.sqrt(2 * 19)
        agg_bound = 380 + 3 * math.sqrt(2 * 380)
        assert max(per_pos) <= pos_bound
        assert sum(per_pos) <= agg_bound


class TestValidatePermutation:
    def test_ok(self):
        assert validate_permutation(Permutation(2, 4, (0, 1, 3, 4))) is None

    def test_contains_owner(self):
        msg = validate_permutation(Permutation(2, 4, (0, 1, 2, 4)))
        assert msg is not None and "owner" in msg

    def test_wrong_length(self):
        msg = validate_permutation(Permutation(2, 4, (0, 1, 3)))
        assert msg is not None and "length" in msg

    def test_duplicate(self):
        msg = validate_permutation(Permutation(2, 4, (0, 1, 3, 3)))
        assert msg is not None and "duplicate" in msg

    def test_out_of_range(self):
        msg = validate_permutation(Permutation(2, 4, (0, 1, 3, 9)))
        assert msg is not None and "range" in msg


class TestComposeFsa:
    def test_first_processor_broadcasts_immediately(self):
        prog = compose_fsa(0, 2, identity_permutation(0, 2))
        kinds = [s.kind for s in prog.states]
        assert kinds == [
            StateKind.WAIT_SEND, StateKind.SEND,
            StateKind.WAIT_SEND, StateKind.SEND,
            StateKind.WAIT_RECV, StateKind.RECV,
            StateKind.WAIT_RECV, StateKind.RECV,
        ]
        assert [s.target for s in prog.states[:4]] == [1, 1, 2, 2]

    def test_last_processor_receives_first(self):
        prog = compose_fsa(2, 2, identity_permutation(2, 2))
        kinds = [s.kind for s in prog.states]
        assert kinds[:4] == [StateKind.WAIT_RECV, StateKind.RECV] * 2
        assert [s.target for s in prog.states[4:]] == [0, 0, 1, 1]

    def test_middle_processor_pipelined(self):
        prog = compose_fsa(1, 2, pipelined_permutation(1, 2))
        kinds = [(s.kind, s.target) for s in prog.states]
        assert kinds == [
            (StateKind.WAIT_RECV, None), (StateKind.RECV, None),
            (StateKind.WAIT_SEND, 2), (StateKind.SEND, 2),
            (StateKind.WAIT_SEND, 0), (StateKind.SEND, 0),
            (StateKind.WAIT_RECV, None), (StateKind.RECV, None),
        ]

    def test_owner_mismatch_rejected(self):
        with pytest.raises(ValueError):
            compose_fsa(1, 4, identity_permutation(2, 4))

    @given(st.integers(1, 25).flatmap(lambda n: st.tuples(st.just(n),
                                                          st.integers(0, n))))
    @settings(max_examples=60)
    def test_program_shape(self, n_i):
        n, i = n_i
        prog = compose_fsa(i, n, pipelined_permutation(i, n))
        assert len(prog.states) == 4 * n
        sends = [s.target for s in prog.states if s.kind is StateKind.SEND]
        assert sorted(sends) == [j for j in range(n + 1) if j != i]
        receives = sum(1 for s in prog.states if s.kind is StateKind.RECV)
        assert receives == n


class TestParsePermutations:
    def test_round_trip(self):
        text = "0: 1,2\n1: 2,0\n2: 0,1\n"
        perms = parse_permutations(text)
        assert [p.targets for p in perms] == [(1, 2), (2, 0), (0, 1)]

    def test_comments_and_blank_lines(self):
        text = "# layout\n\n0: 1\n1: 0\n"
        assert len(parse_permutations(text)) == 2

    def test_missing_row(self):
        with pytest.raises(ValueError, match="missing"):
            parse_permutations("0: 1,2\n2: 0,1\n")

    def test_invalid_targets(self):
        with pytest.raises(ValueError, match="duplicate target"):
            parse_permutations("0: 1,1\n1: 0,2\n2: 0,1\n")

    def test_syntax_error(self):
        with pytest.raises(ValueError, match="line 1"):
            parse_permutations("not a row\n")


def test_permutation_set_families_are_valid():
    for strategy, seed in (("identity", None), ("pipelined", None),
                           ("random", 7)):
        perms = permutation_set(strategy, 9, seed)
        assert len(perms) == 10
        assert all(validate_permutation(p) is None for p in perms)
