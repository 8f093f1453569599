"""Periodic state-space model: transitions, Markov maps, feedback, checks."""

from fractions import Fraction

import pytest

from perdec import linalg
from perdec.errors import NotOutputReachable, NotStable
from perdec.periodic import PeriodicSystem, apply_feedback, verify_decoupled
from perdec.poly import Poly

from helpers import load_example

F_STAB = [[[-1, 1], [0, -1]], [[0, 0], [-1, 0]]]
G_ID = [[[1, 0], [0, 1]], [[1, 0], [0, 1]]]
F_DEC = [[[-1, 0], [0, 0]], [[0, -1], [0, 0]]]
G_DEC = [[[1, -1], [0, 1]], [[-1, 1], [1, 0]]]


class TestModel:
    def test_shapes_fixture1(self):
        s = load_example("example1.json")
        assert (s.T, s.m, s.p, s.dims) == (2, 2, 2, [2, 2])

    def test_shapes_varying_dims(self):
        s2 = load_example("example2.json")
        assert s2.dims == [3, 2]
        s3 = load_example("example3.json")
        assert s3.dims == [2, 3]

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            PeriodicSystem([[[1]]], [[[1], [1]]], [[[1]]], [[[0]]])
        with pytest.raises(ValueError):
            PeriodicSystem([[[1]], [[1]]], [[[1]]], [[[1]], [[1]]], [[[0]], [[0]]])

    def test_transition_and_monodromy(self):
        s = load_example("example1.json")
        assert s.transition(1, 0) == linalg.fr([[2, 0], [0, 1]])
        assert s.transition(2, 0) == linalg.fr([[2, 0], [2, 1]])
        assert s.monodromy(0) == linalg.fr([[2, 0], [2, 1]])
        assert s.monodromy(1) == linalg.fr([[2, 0], [1, 1]])
        assert s.transition(0, 0) == linalg.identity(2)

    def test_markov(self):
        s = load_example("example1_stabilized.json")
        assert s.markov(0, 0) == linalg.fr([[0, 0], [0, 0]])
        # one-step map at phase 0 reaches back to B(1)
        assert s.markov(1, 0) == linalg.fr([[0, 1], [1, 1]])
        assert s.markov(1, 1) == linalg.fr([[1, 1], [0, 1]])
        # two steps back from phase 1: C(1) A(0) B(1)
        assert s.markov(2, 1) == linalg.matmul(
            linalg.fr([[1, 0], [0, 0]]), linalg.fr([[0, 1], [1, 1]])
        )

    def test_stability(self):
        assert not load_example("example1.json").is_stable()
        assert load_example("example1_stabilized.json").is_stable()
        assert load_example("example2.json").is_stable()
        assert load_example("example3.json").is_stable()
        with pytest.raises(NotStable):
            load_example("example1.json").assert_stable()

    def test_monodromy_char_poly(self):
        s = load_example("example1.json")
        assert linalg.char_poly(s.monodromy(0)) == Poly([2, -3, 1])  # roots 1 and 2

    def test_output_reachability(self):
        for name in ("example1.json", "example2.json", "example3.json"):
            ok, t = load_example(name).is_output_reachable()
            assert ok and t is None
        s = load_example("example1.json")
        dead = PeriodicSystem(s.A, s.B, [linalg.zeros(2, 2)] * 2, [linalg.zeros(2, 2)] * 2)
        ok, t = dead.is_output_reachable()
        assert not ok and t == 0
        with pytest.raises(NotOutputReachable):
            dead.assert_output_reachable()

    def test_shifted(self):
        s = load_example("example2.json")
        sh = s.shifted(1)
        assert sh.dims == [2, 3]
        assert sh.A[0] == s.A[1] and sh.B[1] == s.B[0]
        assert sh.shifted(1) == s

    def test_default_horizon(self):
        assert load_example("example1.json").default_horizon() == 2 * 4 + 2
        assert load_example("example2.json").default_horizon() == 2 * 5 + 2

    def test_simulate(self):
        s = load_example("example1.json")
        states, outputs = s.simulate([1, 0], [[1, 0], [0, 0], [0, 0]])
        # x(1) = A(0)x(0) + B(0)u(0) = [2,0] + [1,0] = [3,0]
        assert states[1] == [3, 0]
        assert outputs[0] == [1, 0]
        # x(2) = A(1)[3,0] = [3,3]
        assert states[2] == [3, 3]
        assert outputs[1] == [3, 0]
        assert states[3] == [6, 3]

    def test_simulate_varying_dims(self):
        s = load_example("example2.json")
        states, outputs = s.simulate([0, 0, 0], [[1, 0, 0], [0, 0, 0]])
        assert len(states[0]) == 3 and len(states[1]) == 2 and len(states[2]) == 3
        assert outputs[0] == [1, 1]


class TestFeedback:
    def test_stabilizing_gains_match_fixture(self):
        s = load_example("example1.json")
        closed = apply_feedback(s, F_STAB, G_ID)
        assert closed == load_example("example1_stabilized.json")

    def test_decoupling_gains_give_identity_chain(self):
        s = load_example("example1_stabilized.json")
        closed = apply_feedback(s, F_DEC, G_DEC)
        for t in range(2):
            assert closed.A[t] == linalg.zeros(2, 2)
            assert closed.B[t] == linalg.identity(2)
            assert closed.C[t] == linalg.identity(2)
            assert closed.D[t] == linalg.zeros(2, 2)

    def test_nonregular_feedback(self):
        s = load_example("example2.json")
        F = [linalg.zeros(3, 3), linalg.zeros(3, 2)]
        G = [linalg.fr([[1, 0], [0, 1], [0, 0]])] * 2
        closed = apply_feedback(s, F, G)
        assert closed.m == 2
        assert closed.D[0] == linalg.fr([[1, 0], [1, 1]])

    def test_gain_shape_validation(self):
        s = load_example("example1.json")
        with pytest.raises(ValueError):
            apply_feedback(s, [linalg.zeros(3, 2)] * 2, G_ID)
        with pytest.raises(ValueError):
            apply_feedback(s, F_DEC, [linalg.zeros(1, 2)] * 2)


class TestVerifyDecoupled:
    def test_decoupled_chain(self):
        s = load_example("example1_stabilized.json")
        closed = apply_feedback(s, F_DEC, G_DEC)
        assert verify_decoupled(closed)

    def test_coupled_rejected(self):
        v = verify_decoupled(load_example("example1_stabilized.json"))
        assert not v and v.reason == "cross-coupling"

    def test_unstable_rejected(self):
        s = load_example("example1.json")
        diag = PeriodicSystem(
            s.A, [linalg.identity(2)] * 2, [linalg.identity(2)] * 2, [linalg.zeros(2, 2)] * 2
        )
        # diagonal markov maps but unstable growth inside
        v = verify_decoupled(diag)
        assert not v and v.reason in ("unstable", "cross-coupling")

    def test_dead_channel(self):
        s = load_example("example1_stabilized.json")
        closed = apply_feedback(s, F_DEC, G_DEC)
        gutted = PeriodicSystem(
            closed.A,
            [[[1, 0], [0, 0]]] * 2,
            closed.C,
            closed.D,
        )
        v = verify_decoupled(gutted)
        assert not v and v.reason == "dead channel"

    def test_shape_mismatch(self):
        v = verify_decoupled(load_example("example2.json"))
        assert not v and v.reason == "shape"
