"""Tests for dual proofs, structural classification, and the candidate
enumeration over marginal scenarios."""

import pytest
from hypothesis import given, strategies as st

from polyproj.analysis import (CHAIN, MUTUAL_INFORMATION, VIOLATION,
                               ElementalProof, EnumerationIncomplete,
                               enumerate_structured_facets, extract_proof,
                               lift_to_space, structural_check,
                               structured_candidates)
from polyproj.chm import chm_project
from polyproj.lp import ConstraintSystem, Face, normalize_face
from polyproj.matrixfile import reorder_to
from polyproj.scenarios import (ElementalForm, bell_scenario,
                                bell_symmetry_group, classify,
                                elemental_inequalities, entropy_space,
                                form_row)
from polyproj.verify import load_fixture

F = frozenset


# ---------------------------------------------------------------------------
# Shared fixtures
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def bipartite():
    """2-party, 2-setting scenario with one- and two-body observables."""

    system, scenario = bell_scenario(2, 2, (1, 2))
    return system, scenario


@pytest.fixture(scope="module")
def tripartite_18d():
    system, scenario = bell_scenario(3, 2, (1, 2))
    return system, scenario


def scenario_face(scenario, terms):
    """Build a face over the observable coordinates from (varset, coeff)."""

    index = {s: pos for pos, s in enumerate(scenario.observable)}
    coeffs = [0] * scenario.d
    for varset, coeff in terms:
        coeffs[index[F(varset)]] += coeff
    return Face(f=tuple(coeffs), b=0)


def chshe_face(scenario):
    """H(A1B1) + H(A1B2) + H(A2B1) − H(A2B2) − H(A1) − H(B1) ≥ 0."""

    return scenario_face(scenario, [
        ({1, 3}, 1), ({1, 4}, 1), ({2, 3}, 1), ({2, 4}, -1),
        ({1}, -1), ({3}, -1),
    ])


# ---------------------------------------------------------------------------
# extract_proof
# ---------------------------------------------------------------------------


def test_elemental_row_proves_itself():
    system = elemental_inequalities(3)
    for row in system.rows:
        proof = extract_proof(system, row)
        assert proof.reconstruction() == row
        assert len(proof) >= 1


def test_chshe_has_elemental_proof(bipartite):
    system, scenario = bipartite
    g4 = elemental_inequalities(4, scenario.space.names)
    target = lift_to_space(scenario, chshe_face(scenario))
    proof = extract_proof(g4, target)
    assert proof.reconstruction() == target
    assert all(coeff > 0 for _, coeff in proof.terms)
    assert all(form.kind in ("H", "I") for form, _ in proof.terms)


def test_invalid_inequality_rejected():
    g2 = elemental_inequalities(2)
    bad = Face(f=(-1, 0, 0), b=0)            # −H(X1) ≥ 0 is false
    with pytest.raises(ValueError):
        extract_proof(g2, bad)


def test_slack_inequality_rejected():
    g2 = elemental_inequalities(2)
    mi = form_row(entropy_space(2), ElementalForm("I", 1, 2, F(())))
    with pytest.raises(ValueError):
        extract_proof(g2, Face(f=mi.f, b=-1))


def test_misordered_system_rejected(bipartite):
    system, scenario = bipartite
    # The scenario system puts observable columns first, which is not the
    # canonical entropy-space order the proof extraction contracts.
    with pytest.raises(ValueError):
        extract_proof(system, Face(f=(0,) * system.dim, b=0))


def test_proof_scales_with_target():
    system = elemental_inequalities(3)
    row = system.rows[5]
    tripled = Face(f=tuple(3 * c for c in row.f), b=0)
    proof = extract_proof(system, tripled)
    assert proof.reconstruction() == tripled


def test_proof_rejects_negative_coefficients():
    space = entropy_space(2)
    mi = ElementalForm("I", 1, 2, F(()))
    with pytest.raises(ValueError):
        ElementalProof(space=space, target=form_row(space, mi),
                       terms=((mi, -1),))


def test_proof_rejects_wrong_sum():
    space = entropy_space(2)
    mi = ElementalForm("I", 1, 2, F(()))
    with pytest.raises(ValueError):
        ElementalProof(space=space, target=Face(f=(1, 0, 0), b=0),
                       terms=((mi, 1),))


@given(st.lists(st.tuples(st.integers(0, 8), st.integers(0, 3)),
                min_size=1, max_size=5))
def test_random_combinations_reconstruct(terms):
    system = elemental_inequalities(3)
    coeffs = [0] * system.dim
    for row_index, coeff in terms:
        row = system.rows[row_index]
        for pos, value in enumerate(row.f):
            coeffs[pos] += coeff * value
    target = Face(f=tuple(coeffs), b=0)
    if all(c == 0 for c in target.f):
        return
    proof = extract_proof(system, target)
    assert proof.reconstruction() == target


def test_i17_printed_expansion_and_own_proof():
    """The known eight-term unit certificate for row 17 of the 26D
    reference listing sums exactly, and the extracted dual proof
    reconstructs the same row."""

    system, scenario = bell_scenario(3, 2, (1, 2, 3))
    golden = reorder_to(load_fixture("bell-26d").system,
                        scenario.observable_names)
    target = lift_to_space(scenario, golden.rows[17])
    printed = (
        ElementalForm("H", 1, 0, F({2, 3, 4, 5, 6})),
        ElementalForm("H", 5, 0, F({1, 2, 3, 4, 6})),
        ElementalForm("I", 1, 2, F({3, 4, 5, 6})),
        ElementalForm("I", 4, 5, F({1, 2, 3, 6})),
        ElementalForm("I", 1, 5, F({2, 3, 6})),
        ElementalForm("I", 1, 4, F({3, 5, 6})),
        ElementalForm("I", 5, 6, F({1, 3})),
        ElementalForm("I", 2, 6, F({3, 5})),
    )
    proof = ElementalProof(space=scenario.space, target=target,
                           terms=tuple((form, 1) for form in printed))
    assert len(proof) == 8
    assert proof.reconstruction() == target

    g6 = elemental_inequalities(6, scenario.space.names)
    own = extract_proof(g6, target)
    assert own.reconstruction() == target


# ---------------------------------------------------------------------------
# structural_check
# ---------------------------------------------------------------------------


def test_mutual_information_category(bipartite):
    _, scenario = bipartite
    mi = scenario_face(scenario, [({1}, 1), ({3}, 1), ({1, 3}, -1)])
    report = structural_check(mi, scenario)
    assert report.category == MUTUAL_INFORMATION
    assert report.ok
    assert str(report) == "MutualInformation"


def test_chshe_chain_category(bipartite):
    _, scenario = bipartite
    report = structural_check(chshe_face(scenario), scenario)
    assert report.category == CHAIN
    assert (report.k, report.m) == (2, 1)
    assert report.sums == (0, 2, 3, 1)


def test_fabricated_violation(bipartite):
    _, scenario = bipartite
    bad = scenario_face(scenario, [({1}, 1), ({2}, 1),
                                   ({1, 3}, -1), ({2, 4}, -1)])
    report = structural_check(bad, scenario)
    assert report.category == VIOLATION
    assert not report.ok
    assert str(report) == "Violation"


def test_scale_invariance(bipartite):
    _, scenario = bipartite
    face = chshe_face(scenario)
    doubled = Face(f=tuple(2 * c for c in face.f), b=0)
    assert structural_check(doubled, scenario) == \
        structural_check(face, scenario)


def test_rejects_zero_nonhomogeneous_and_wide_faces(bipartite):
    _, scenario = bipartite
    with pytest.raises(ValueError):
        structural_check(Face(f=(0,) * scenario.d, b=0), scenario)
    with pytest.raises(ValueError):
        structural_check(Face(f=(1,) + (0,) * (scenario.d - 1), b=1),
                         scenario)
    with pytest.raises(ValueError):
        structural_check(Face(f=(1, 0), b=0), scenario)


def test_rejects_three_body_coordinates():
    _, scenario = bell_scenario(3, 2, (1, 2, 3))
    index = {s: pos for pos, s in enumerate(scenario.observable)}
    coeffs = [0] * scenario.d
    coeffs[index[F({1, 3, 5})]] = 1
    with pytest.raises(ValueError, match="outside the one/two-body form"):
        structural_check(Face(f=tuple(coeffs), b=0), scenario)


def test_18d_listing_classifies_cleanly(tripartite_18d):
    _, scenario = tripartite_18d
    golden = reorder_to(load_fixture("bell-18d").system,
                        scenario.observable_names)
    reports = [structural_check(row, scenario) for row in golden.rows]
    assert all(report.ok for report in reports)
    assert reports[0].category == MUTUAL_INFORMATION
    assert reports[9].category == CHAIN
    assert (reports[9].k, reports[9].m) == (4, 2)
    assert reports[9].sums == (0, 4, 6, 2)


def test_12d_listing_classifies_cleanly():
    _, scenario = bell_scenario(3, 2, (2,))
    golden = reorder_to(load_fixture("bell-12d").system,
                        scenario.observable_names)
    reports = [structural_check(row, scenario) for row in golden.rows]
    assert all(report.ok for report in reports)
    # no one-body coordinates: every class is a completed chain
    assert all(report.category == CHAIN for report in reports)
    assert all(report.k % 2 == 0 and 0 <= report.m <= report.k
               for report in reports)
    assert (reports[0].k, reports[0].m) == (2, 0)


# ---------------------------------------------------------------------------
# enumerate_structured_facets
# ---------------------------------------------------------------------------


def test_bipartite_enumeration_sound_and_complete(bipartite):
    system, scenario = bipartite
    facets = enumerate_structured_facets(scenario, system, 2)
    true_facets = set(chm_project(system, scenario.d).facets)
    assert set(facets) <= true_facets          # soundness
    assert normalize_face(chshe_face(scenario).f, 0) in facets
    mi = scenario_face(scenario, [({1}, 1), ({3}, 1), ({1, 3}, -1)])
    assert normalize_face(mi.f, 0) in facets
    # completeness for the classified range: every true facet whose
    # structure is a mutual information or a chain with k <= 2 is found
    for facet in true_facets:
        report = structural_check(facet, scenario)
        if report.category == MUTUAL_INFORMATION or \
                (report.category == CHAIN and report.k <= 2):
            assert facet in facets


def test_pure_two_body_enumeration():
    system, scenario = bell_scenario(2, 2, (2,))
    facets = enumerate_structured_facets(scenario, system, 2)
    true_facets = set(chm_project(system, scenario.d).facets)
    # the four submodularity-style chains plus the four nonnegativity
    # rows: all eight facets of this cone fall out of the search
    assert set(facets) == true_facets
    assert len(facets) == 8
    reports = [structural_check(face, scenario) for face in facets]
    chains = [r for r in reports if r.category == CHAIN]
    assert len(chains) == 4
    assert all((r.k, r.m) == (2, 0) for r in chains)
    # plain nonnegativity rows sit outside the chain template
    assert sum(r.category == VIOLATION for r in reports) == 4


def test_candidates_deduplicated_and_flagged(bipartite):
    _, scenario = bipartite
    candidates, complete = structured_candidates(scenario, 2)
    assert complete
    assert len(candidates) == len(set(candidates))
    assert all(face.b == 0 for face in candidates)
    with pytest.raises(ValueError):
        structured_candidates(scenario, 0)


def test_budget_abort_carries_partial(bipartite):
    system, scenario = bipartite
    with pytest.raises(EnumerationIncomplete) as err:
        enumerate_structured_facets(scenario, system, 2, node_budget=3)
    assert isinstance(err.value.partial, list)


def test_enumeration_rejects_foreign_system(bipartite):
    _, scenario = bipartite
    with pytest.raises(ValueError):
        enumerate_structured_facets(
            scenario, ConstraintSystem(rows=(), dim=3), 1)


@pytest.mark.slow
def test_18d_k1_covers_listed_mi_and_short_chains(tripartite_18d):
    system, scenario = tripartite_18d
    golden = reorder_to(load_fixture("bell-18d").system,
                        scenario.observable_names)
    group = bell_symmetry_group(3, 2, scenario)
    facets = enumerate_structured_facets(scenario, system, 1)
    found = set(classify(facets, group))
    for row in golden.rows:
        report = structural_check(row, scenario)
        if report.category == MUTUAL_INFORMATION or \
                (report.category == CHAIN and report.k == 1):
            rep = min(group.orbit(normalize_face(row.f, row.b)))
            assert rep in found


@pytest.mark.slow
def test_12d_enumeration_sound():
    system, scenario = bell_scenario(3, 2, (2,))
    facets = enumerate_structured_facets(scenario, system, 2)
    golden = reorder_to(load_fixture("bell-12d").system,
                        scenario.observable_names)
    group = bell_symmetry_group(3, 2, scenario)
    golden_classes = set(classify(
        [normalize_face(r.f, r.b) for r in golden.rows], group))
    for rep in classify(facets, group):
        assert rep in golden_classes
