"""Shared fixtures: meshes, assemblies, and reference solutions.

The expensive objects (kernel matrices, solved problems) are session scoped
and shared between the acceptance suite and the module tests.  The refinement
pair lives on a tighter exterior collar (r_ext = 1.35) than the default mesh
so the fine kernel stays within memory budget.
"""
import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hfrac import (
    FracParams,
    Problem,
    assemble_kernel,
    build_mesh,
    far_field_weights,
    solve_linear,
)
from hfrac import profiles

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("suite")

REF = FracParams(n=1, s=0.5, p=2.0)
ORIGIN = np.zeros(3)


@pytest.fixture(scope="session")
def params_ref():
    return REF


@pytest.fixture(scope="session")
def mesh_default():
    return build_mesh(0.22, 1.0, 1.5)


@pytest.fixture(scope="session")
def assembly_default(mesh_default):
    K = assemble_kernel(mesh_default, REF)
    S = far_field_weights(mesh_default, REF)
    return K, S


@pytest.fixture(scope="session")
def mesh_pair():
    return {
        "coarse": build_mesh(0.22, 1.0, 1.35),
        "fine": build_mesh(0.11, 1.0, 1.35),
    }


@pytest.fixture(scope="session")
def assembly_pair(mesh_pair):
    return {
        key: (assemble_kernel(mesh, REF), far_field_weights(mesh, REF))
        for key, mesh in mesh_pair.items()
    }


@pytest.fixture(scope="session")
def bump_profile():
    return profiles.gaussian_bump(1.0, width=0.6, center=(0.0, 0.0, 0.3))


@pytest.fixture(scope="session")
def peak_profile():
    return profiles.gaussian_bump(50.0, width=0.3)


@pytest.fixture(scope="session")
def flip_profile():
    return profiles.sign_flip_shell(1.0)


def _solve_pair(mesh_pair, assembly_pair, f, g, g_far=0.0):
    out = {}
    for key in ("coarse", "fine"):
        mesh = mesh_pair[key]
        K, S = assembly_pair[key]
        prob = Problem(mesh=mesh, params=REF, f=f, g=g, g_far=g_far)
        out[key] = solve_linear(prob, K, S)
    return out


@pytest.fixture(scope="session")
def bump_solutions(mesh_pair, assembly_pair, bump_profile):
    """f = 0, nonnegative exterior bump, on both refinement meshes."""
    return _solve_pair(mesh_pair, assembly_pair, 0.0, bump_profile)


@pytest.fixture(scope="session")
def source_solutions(mesh_pair, assembly_pair):
    """f = 1, zero exterior data, on both refinement meshes."""
    return _solve_pair(mesh_pair, assembly_pair, 1.0, 0.0)


@pytest.fixture(scope="session")
def peak_solutions(mesh_pair, assembly_pair, peak_profile):
    """Concentrated interior source, zero exterior data."""
    return _solve_pair(mesh_pair, assembly_pair, peak_profile, 0.0)


@pytest.fixture(scope="session")
def flip_solution(mesh_default, assembly_default, flip_profile):
    """Sign-changing exterior data on the default mesh."""
    K, S = assembly_default
    prob = Problem(
        mesh=mesh_default, params=REF, f=0.0, g=flip_profile, g_far=-0.25
    )
    return solve_linear(prob, K, S)
