"""Shared fixtures: the three model lattices, their cones and the running family."""

from pathlib import Path

import pytest

from movstab.chern_calculus import SheafClass
from movstab.cone_engine import cone_from_generators, dual_cone
from movstab.lattice_core import NSLattice
from movstab.stability_engine import SubsheafFamily

PROJECTS_DIR = Path(__file__).resolve().parent.parent / "projects"
CORPUS = ("p1xp1", "blowup_p2", "p2", "ruled_counterexample")


@pytest.fixture
def p1xp1():
    return NSLattice(gram=[[0, 1], [1, 0]], basis_labels=("F1", "F2"), name="p1xp1")


@pytest.fixture
def blowup():
    return NSLattice(gram=[[1, 0], [0, -1]], basis_labels=("H", "E"), name="blowup")


@pytest.fixture
def p2():
    return NSLattice(gram=[[1]], basis_labels=("H",), name="p2")


@pytest.fixture
def quadrant(p1xp1):
    """Eff = Nef = Mov of P¹×P¹: the first quadrant."""
    return cone_from_generators([p1xp1.make([1, 0]), p1xp1.make([0, 1])])


@pytest.fixture
def blowup_eff(blowup):
    return cone_from_generators([blowup.make([0, 1]), blowup.make([1, -1])])


@pytest.fixture
def blowup_nef(blowup_eff):
    return dual_cone(blowup_eff)


@pytest.fixture
def running_top(p1xp1):
    return SheafClass(2, p1xp1.make([1, 1]), 1)


@pytest.fixture
def running_members(p1xp1):
    return (
        SheafClass(1, p1xp1.make([1, 0]), 0),
        SheafClass(1, p1xp1.make([0, 1]), 0),
    )


@pytest.fixture
def running_family(running_top, running_members):
    """E = (2, (1,1), 1) with F₁ = O(1,0) and F₂ = O(0,1), both inside E."""
    return SubsheafFamily(top=running_top, members=running_members, contains=((0, 2), (1, 2)))


@pytest.fixture
def corpus_paths():
    return [PROJECTS_DIR / name / "bundle.json" for name in CORPUS]
