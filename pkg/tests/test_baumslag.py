import random

import pytest

from sysgirth.baumslag import (
    PsiMap, PsiPreconditionError, SurfaceAction, delta_word_check, in_free_factor, k_from_girth,
    preimage_action, psi_apply, relator_image, short_stabilizers, trivial_surface_action,
    verify_ball_injectivity,
)
from sysgirth.constructors import build_girth_graph
from sysgirth.schreier import graph_to_action
from sysgirth.words import RELATOR, U, inverse, reduce, surface_equal


def test_images_of_generators():
    psi = PsiMap(1)
    assert psi.l == 7
    assert psi_apply(psi, "x") == "x" and psi_apply(psi, "y") == "y"
    assert psi_apply(psi, "b") == reduce(U * 7 + "x" + inverse(U) * 7)
    assert len(psi_apply(psi, "a")) == 55  # one letter of u cancels on each side


@pytest.mark.parametrize("k", [1, 2, 5, 10, 20])
def test_relator_maps_to_identity(k):
    assert relator_image(PsiMap(k)) == ""


def test_homomorphism_on_random_words():
    rng = random.Random(1)
    psi = PsiMap(2)
    for _ in range(200):
        v = "".join(rng.choice("xXyYaAbB") for _ in range(rng.randint(0, 8)))
        w = "".join(rng.choice("xXyYaAbB") for _ in range(rng.randint(0, 8)))
        assert psi_apply(psi, v + w) == reduce(psi_apply(psi, v) + psi_apply(psi, w))
        assert psi_apply(psi, inverse(v)) == inverse(psi_apply(psi, v))


def test_relator_conjugates_have_trivial_image():
    psi = PsiMap(3)
    for c in "xyab":
        assert psi_apply(psi, c + RELATOR + c.upper()) == ""


def test_free_factor_membership():
    assert in_free_factor("xyXY") and in_free_factor("")
    assert in_free_factor("baBA")  # equals [x, y] in the surface group
    assert not in_free_factor("a") and not in_free_factor("ab")


@pytest.mark.parametrize("k", [2, 3])
def test_ball_injectivity(k):
    report = verify_ball_injectivity(PsiMap(k), k)
    assert report["violations"] == 0 and report["elements_checked"] > 0
    assert report["max_image_length"] <= 63 * k * k


def test_ball_radius_must_not_exceed_k():
    with pytest.raises(ValueError):
        verify_ball_injectivity(PsiMap(2), 3)


def test_k_from_girth():
    assert k_from_girth(62) == 0 and k_from_girth(63) == 1
    assert k_from_girth(252) == 2 and k_from_girth(63 * 25) == 5
    with pytest.raises(ValueError):
        k_from_girth(0)


def test_delta_words():
    out = delta_word_check(["x", "y"], ["xy"], k=4)
    assert out["all_nontrivial"] and out["above_18k"]
    out = delta_word_check(["", "y", ""], ["x", "Y"], k=4)
    assert out["all_nontrivial"] and out["r"] == 2
    assert len(out["lengths"]) == 4


def test_delta_preconditions():
    with pytest.raises(PsiPreconditionError):
        delta_word_check(["x", U, "y"], ["x", "y"], k=10)
    with pytest.raises(PsiPreconditionError):
        delta_word_check(["x", "y"], [U], k=10)
    with pytest.raises(PsiPreconditionError):
        delta_word_check(["xxxx", "y"], ["y"], k=3)
    with pytest.raises(PsiPreconditionError):
        delta_word_check(["x"], ["y"], k=3)


def test_preimage_action():
    gamma = graph_to_action(build_girth_graph(60, 5).graph)
    psi = PsiMap(1)
    action = preimage_action(psi, gamma)
    assert action.n == 60 and action.orbit_size() == 60
    # membership agrees with membership of the image
    rng = random.Random(3)
    for _ in range(200):
        w = "".join(rng.choice("xXyYaAbB") for _ in range(rng.randint(0, 10)))
        image = psi_apply(psi, w)
        assert action.contains(w) == (gamma.act(image, gamma.base) == gamma.base)
    # girth 5 is far below 63 k^2, so short stabilizers may exist; each listed
    # word must really fix the base, and F2 words need length >= girth
    for w in short_stabilizers(action, 2):
        assert action.contains(w)
        assert not in_free_factor(w)


def test_trivial_action_and_relator_check():
    assert trivial_surface_action().contains("ab")
    swap = SurfaceAction(2, {"x": [1, 0], "y": [0, 1], "a": [0, 1], "b": [0, 1]})
    assert swap.contains("xx") and not swap.contains("x")
    # the relator check rejects non-actions of the surface group
    with pytest.raises(ValueError):
        SurfaceAction(3, {"x": [1, 2, 0], "y": [1, 0, 2], "a": [0, 1, 2], "b": [0, 1, 2]})


def test_surface_equal_agrees_with_images():
    psi = PsiMap(1)
    assert surface_equal("xyXY", "baBA")
    assert psi_apply(psi, "xyXY") == psi_apply(psi, "baBA")
