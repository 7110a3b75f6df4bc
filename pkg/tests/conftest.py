import pytest

from logcob.cobordism import bundle_pair, normal_cone_relation, product
from logcob.varieties import build_chow, builtin, builtin_pairs


def relation_corpus_3d():
    """Normal cone relations on threefold pairs, including second-generation ones."""
    rels = []
    for name in ("p3_h", "p3_hh", "p3_hhh", "op2_1", "f1xp1", "p2xp1_fiber",
                 "p2xp1_p1xp1", "p2xp1_both", "p1cubed_a"):
        p = builtin(name)
        for d in p.boundary:
            rels.append(normal_cone_relation(p, d.name))
    # deform again along the section of a bundle term
    first = normal_cone_relation(builtin("p3_h"), "H")
    bundle = first.rhs.terms[1][1]
    rels.append(normal_cone_relation(bundle, "H"))
    # a bundle pair whose pulled-back component keeps its restriction map
    p2 = builtin("p2_line")
    b = bundle_pair(p2, build_chow(p2.ambient).gen("H"))
    for d in b.boundary:
        rels.append(normal_cone_relation(b, d.name))
    # products of boundary points
    p1_pt = builtin("p1_pt")
    cube = product(product(p1_pt, p1_pt), p1_pt)
    for d in cube.boundary:
        rels.append(normal_cone_relation(cube, d.name))
    return rels


def relation_corpus_low():
    rels = [normal_cone_relation(builtin("p1_pt"), "pt")]
    for name in ("p2_line", "p1xp1_a", "p1xp1_ab", "f1_sec"):
        p = builtin(name)
        for d in p.boundary:
            rels.append(normal_cone_relation(p, d.name))
    return rels


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def verdict():
    """Record one acceptance line, then assert on it."""

    def record(number, title, ok, detail):
        _ACCEPTANCE[number] = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])


@pytest.fixture(scope="session")
def corpus3():
    return relation_corpus_3d()


@pytest.fixture(scope="session")
def corpus_low():
    return relation_corpus_low()


@pytest.fixture(scope="session")
def builtin_rings():
    return {name: p.ring for name, p in builtin_pairs().items()}
