import numpy as np
import pytest
from scipy import linalg

from analysis.lagrangian import (
    Frame, LagrangianPath, adapted_complement, complement_frame, count_train_entries, crossing_form,
    crossing_form_value, distance_to_nonsimple, eigenvalue_motion, find_crossings,
    first_order_form_frame, fixture_paths, graph_matrix, is_lagrangian, is_symplectic,
    lagrangian_plucker_residual, maslov_index, omega, path_one, path_one_complement, path_two,
    plucker, plucker_relation, plucker_trajectory, random_symplectic, sandwich_frame,
    sandwich_train_contains, symplectic_matrix, transform_path,
)
from utils.errors import CrossingError, InvalidParameterError, TransversalityError

E = np.eye(4)
REF = sandwich_frame()


def _graph_frame(S):
    """Mặt phẳng Lagrangian {(x, S x)} với S đối xứng"""
    S = np.asarray(S, dtype=float)
    return Frame(np.vstack([np.eye(2), S]))


def _touching_path():
    """det[L | sandwich] = s², crossing bậc hai tại 0"""
    return LagrangianPath(
        frame_at=lambda s: Frame.from_columns([1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, s ** 2]),
        t_start=-1.0, t_end=1.0)


# ==================== Đại số symplectic và Plücker ====================

def test_symplectic_form_basics():
    J = symplectic_matrix(2)
    assert np.allclose(J @ J, -np.eye(4))
    assert omega(E[0], E[2]) == 1.0
    assert omega(E[2], E[0]) == -1.0
    assert omega(E[0], E[1]) == 0.0


def test_is_lagrangian():
    assert is_lagrangian(Frame.from_columns(E[0], E[1]))[0]
    assert is_lagrangian(REF)[0]
    assert is_lagrangian(_graph_frame([[0.3, -0.2], [-0.2, 1.1]]))[0]
    assert not is_lagrangian(Frame.from_columns(E[0], E[2]))[0]
    assert not is_lagrangian(Frame.from_columns(E[0], 2 * E[0]))[0]


def test_fixture_paths_are_lagrangian():
    one, two = fixture_paths()
    assert np.allclose(one.frame_at(0.0).matrix[:, 0], [0, 1, 2, 0])
    assert np.allclose(two.frame_at(0.0).matrix[:, 0], [0, 1, 0, 0])
    for path in (one, two):
        for _, frame in path.sample(21):
            ok, residual = is_lagrangian(frame)
            assert ok, residual


def test_plucker_of_coordinate_planes():
    P = plucker(Frame.from_columns(E[0], E[1]))
    assert np.allclose(P, [1, 0, 0, 0, 0, 0])
    assert np.allclose(plucker(REF), [0, 0, 0, 1, 0, 0])
    assert distance_to_nonsimple(plucker(REF)) == pytest.approx(0.0)


def test_plucker_depends_only_on_oriented_plane():
    rng = np.random.default_rng(11)
    frame = Frame(rng.normal(size=(4, 2)))
    M = np.array([[2.0, 1.0], [0.5, 3.0]])
    assert np.allclose(plucker(frame), plucker(Frame(frame.matrix @ M)))
    flip = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(plucker(frame), -plucker(Frame(frame.matrix @ flip)))


def test_plucker_relation_and_lagrangian_condition():
    rng = np.random.default_rng(5)
    for _ in range(10):
        P = plucker(Frame(rng.normal(size=(4, 2))))
        assert abs(plucker_relation(P)) < 1e-12
        S = rng.normal(size=(2, 2))
        L = plucker(_graph_frame(S + S.T))
        assert abs(lagrangian_plucker_residual(L)) < 1e-12


def test_plucker_rejects_rank_deficient_frame():
    with pytest.raises(InvalidParameterError):
        plucker(Frame.from_columns(E[0], E[0]))


def test_plucker_trajectory_keeps_sign_continuous():
    angles = np.linspace(0.0, 3.0, 40)
    frames = [Frame.from_columns(np.cos(a) * E[0] + np.sin(a) * E[2], E[1]) for a in angles]
    # đổi thứ tự cột ở nửa sau: hướng đảo nhưng mặt phẳng liên tục
    frames = frames[:20] + [Frame(f.matrix[:, ::-1]) for f in frames[20:]]
    rows = plucker_trajectory(frames)
    assert np.all(np.sum(rows[1:] * rows[:-1], axis=1) > 0)
    first = rows[0][np.abs(rows[0]) > 1e-12]
    assert first[0] > 0


def test_train_region_membership():
    assert sandwich_train_contains((-1.0, 0.0, 0.0))
    assert sandwich_train_contains((0.0, 0.0, 0.0))
    assert sandwich_train_contains((0.5, 0.4, 0.0))
    assert not sandwich_train_contains((0.5, 0.6, 0.0))
    assert not sandwich_train_contains((0.5, 0.0, 0.1))


def test_count_train_entries_counts_p14_sign_changes():
    rows = np.array([
        [0.5, 0.0, 0.2, 0.0, 0.0, 0.0],
        [0.5, 0.0, -0.1, 0.0, 0.0, 0.0],
        [0.5, 0.0, -0.3, 0.0, 0.0, 0.0],
        [0.5, 0.0, 0.1, 0.0, 0.0, 0.0],
    ])
    assert count_train_entries(rows) == 2


def test_random_symplectic_is_symplectic():
    psi = random_symplectic(2, np.random.default_rng(1))
    assert is_symplectic(psi)
    assert not is_symplectic(np.diag([2.0, 1.0, 1.0, 1.0]))


# ==================== Ma trận đồ thị ====================

def test_graph_matrix_on_cubic_path():
    path = path_two()
    W = Frame.from_columns(E[2], E[3])
    s = 0.4
    A = graph_matrix(path, 0.0, W, s)
    assert np.allclose(A @ E[0], [0, 0, 0, -s], atol=1e-12)
    assert np.allclose(A @ E[1], [0, 0, -s, -s ** 3 / 3], atol=1e-12)
    assert np.allclose(graph_matrix(path, 0.0, W, 0.0), 0.0, atol=1e-14)


def test_graph_matrix_requires_transverse_plane():
    path = path_two()
    with pytest.raises(TransversalityError):
        graph_matrix(path, 0.0, Frame.from_columns(E[0], E[1]), 0.1)


def test_complement_frame_is_transverse_and_lagrangian():
    frame = path_one().frame_at(0.3)
    W = complement_frame(frame)
    assert is_lagrangian(W)[0]
    assert abs(np.linalg.det(np.hstack([frame.orthonormal().matrix, W.matrix]))) > 0.5


# ==================== Dạng crossing ====================

def test_regular_crossing_on_path_one():
    one = path_one()
    W1 = path_one_complement()
    assert crossing_form_value(one, 0.0, [0.0, 1.0, 2.0, 0.0], 1, W=W1) == pytest.approx(-4.0, abs=1e-8)
    result = crossing_form(one, 0.0, REF, W=W1)
    assert result.order == 1
    assert result.value == pytest.approx(-0.8, abs=1e-8)
    assert result.signature == (0, 1)
    assert result.contribution == -1


def test_first_order_form_from_frame_agrees():
    assert first_order_form_frame(path_one(), 0.0, [1.0, 0.0]) == pytest.approx(-4.0, abs=1e-6)


def test_eigenvalue_motion_on_path_one():
    s = np.array([-0.4, -0.1, 0.2, 0.5])
    motion = eigenvalue_motion(path_one(), 0.0, REF, s, W=path_one_complement())[:, 0]
    expected = -(s / 60.0) * (4 * s ** 2 + 23 * s + 48)
    assert np.allclose(motion, expected, atol=1e-10)


def test_higher_order_crossing_on_path_two():
    two = path_two()
    result = crossing_form(two, 0.0, REF)
    assert result.order == 3
    assert result.value == pytest.approx(-2.0, abs=1e-8)
    assert len(result.lower_forms) == 2
    assert all(np.max(np.abs(f)) < 1e-6 for f in result.lower_forms)
    e2 = [0.0, 1.0, 0.0, 0.0]
    assert crossing_form_value(two, 0.0, e2, 1) == pytest.approx(0.0, abs=1e-8)
    assert crossing_form_value(two, 0.0, e2, 2) == pytest.approx(0.0, abs=1e-8)


def test_eigenvalue_motion_on_path_two():
    s = np.array([-0.3, 0.1, 0.25])
    motion = eigenvalue_motion(path_two(), 0.0, REF, s)[:, 0]
    assert np.allclose(motion, -s ** 3 / 3, atol=1e-12)


def test_first_order_form_does_not_depend_on_w():
    one = path_one()
    default = crossing_form(one, 0.0, REF).value
    assert default == pytest.approx(crossing_form(one, 0.0, REF, W=path_one_complement()).value, abs=1e-6)
    tilted = Frame(np.vstack([[[0.3, 0.1], [0.1, -0.2]], np.eye(2)]))
    assert default == pytest.approx(crossing_form(one, 0.0, REF, W=tilted).value, abs=1e-6)


def test_adapted_complement_on_cubic_path():
    K = np.array([[0.0], [1.0], [0.0], [0.0]])
    W = adapted_complement(K, REF.matrix)
    assert is_lagrangian(W)[0]
    assert np.max(linalg.subspace_angles(W.matrix, np.eye(4)[:, [2, 3]])) < 1e-12
    explicit = crossing_form(path_two(), 0.0, REF, W=Frame.from_columns(E[2], E[3]))
    assert crossing_form(path_two(), 0.0, REF).value == pytest.approx(explicit.value, abs=1e-8)
    # W khác nhưng vẫn chứa e3 = phần bù của ker trong ℓ*
    sheared = Frame.from_columns(E[2], [0.0, 0.7, 0.0, 1.0])
    assert crossing_form(path_two(), 0.0, REF, W=sheared).value == pytest.approx(-2.0, abs=1e-6)


def test_higher_order_form_sees_tilted_complement():
    # W không chứa phần bù của ker trong ℓ*: Q⁽²⁾ không còn bằng 0
    tilted = Frame(np.vstack([[[0.3, 0.1], [0.1, -0.2]], np.eye(2)]))
    assert crossing_form(path_two(), 0.0, REF, W=tilted).order == 2


def test_crossing_form_is_symplectic_invariant():
    psi = random_symplectic(2, np.random.default_rng(42))
    W0 = Frame.from_columns(E[2], E[3])
    e2 = E[1]
    original = crossing_form_value(path_two(), 0.0, e2, 3, W=W0)
    moved = crossing_form_value(transform_path(path_two(), psi), 0.0, psi @ e2, 3,
                                W=W0.transform(psi))
    assert moved == pytest.approx(original, abs=1e-6)
    assert original == pytest.approx(-2.0, abs=1e-8)


def test_crossing_form_errors():
    with pytest.raises(CrossingError):
        crossing_form(path_one(), 0.5, REF)
    constant = LagrangianPath(frame_at=lambda t: REF, t_start=-1.0, t_end=1.0)
    with pytest.raises(CrossingError):
        crossing_form(constant, 0.0, REF)


# ==================== Chỉ số Maslov ====================

@pytest.mark.parametrize("make_path, order", [(path_one, 1), (path_two, 3)])
def test_maslov_index_of_fixture_paths(make_path, order):
    result = maslov_index(make_path(), REF)
    assert result.index == pytest.approx(-1.0)
    assert len(result.crossings) == 1
    assert result.crossings[0].t == pytest.approx(0.0, abs=1e-9)
    assert result.crossings[0].order == order


def test_even_order_crossing_contributes_nothing():
    path = _touching_path()
    assert find_crossings(path, REF) == pytest.approx([0.0], abs=1e-6)
    result = maslov_index(path, REF)
    assert result.crossings[0].order == 2
    assert result.index == 0.0


def test_endpoint_crossing_counts_half():
    two = path_two()
    half = LagrangianPath(frame_at=two.frame_at, t_start=0.0, t_end=1.0)
    result = maslov_index(half, REF)
    assert result.crossings[0].endpoint
    assert result.index == pytest.approx(-0.5)


def test_lagrangian_path_needs_increasing_interval():
    with pytest.raises(InvalidParameterError):
        LagrangianPath(frame_at=lambda t: REF, t_start=1.0, t_end=1.0)


def test_crossing_free_path_has_zero_index():
    transverse = LagrangianPath(frame_at=lambda t: Frame.from_columns(E[0], E[3]),
                                t_start=-1.0, t_end=1.0)
    result = maslov_index(transverse, REF)
    assert result.index == 0.0
    assert result.crossings == []
    with pytest.raises(CrossingError):
        eigenvalue_motion(transverse, 0.0, REF, [0.1])
