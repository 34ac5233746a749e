"""Validation tests for the manipulator model layer.

Covers DH parameter checks, inertial-parameter realizability (symmetry,
positive semidefiniteness, triangle inequality on principal moments), the
packed array view handed to the kernels, and the strict JSON schema.
"""

import json

import numpy as np
import pytest

from tmncell.errors import RobotModelError
from tmncell.robot import (
    DHLink,
    JointState,
    LinkInertia,
    RobotModel,
    load_robot_model,
    robot_model_from_dict,
)

from oracles import point_cloud_inertia


def _plate_tensor():
    # thin plate: izz = ixx + iyy exactly, on the triangle-inequality boundary
    return (0.4, 0.0, 0.0, 0.0, 0.6, 0.0, 0.0, 0.0, 1.0)


def _valid_inertia(**overrides):
    kw = dict(mass=2.0, com=(0.1, -0.2, 0.05), tensor=_plate_tensor())
    kw.update(overrides)
    return LinkInertia(**kw)


class TestDHLink:
    def test_defaults_to_revolute(self):
        link = DHLink(a=0.5, alpha=0.0, d=0.1, theta_offset=0.0)
        assert link.kind == "revolute"

    def test_prismatic_kind_accepted(self):
        link = DHLink(a=0.0, alpha=0.0, d=0.0, theta_offset=0.0, kind="prismatic")
        assert link.kind == "prismatic"

    def test_unknown_kind_rejected(self):
        with pytest.raises(RobotModelError, match="joint kind"):
            DHLink(a=0.0, alpha=0.0, d=0.0, theta_offset=0.0, kind="helical")

    @pytest.mark.parametrize("bad", ["1.0", None, [1.0], True])
    def test_non_numeric_parameter_rejected(self, bad):
        with pytest.raises(RobotModelError, match="dh.a"):
            DHLink(a=bad, alpha=0.0, d=0.0, theta_offset=0.0)

    def test_non_finite_parameter_rejected(self):
        with pytest.raises(RobotModelError, match="finite"):
            DHLink(a=0.0, alpha=float("nan"), d=0.0, theta_offset=0.0)

    def test_frozen(self):
        link = DHLink(a=0.5, alpha=0.0, d=0.0, theta_offset=0.0)
        with pytest.raises(AttributeError):
            link.a = 1.0

    def test_integer_parameters_coerced_to_float(self):
        link = DHLink(a=1, alpha=0, d=2, theta_offset=0)
        assert isinstance(link.a, float) and link.d == 2.0


class TestLinkInertia:
    def test_valid_construction(self):
        li = _valid_inertia()
        assert li.mass == 2.0
        assert li.rotor_inertia == 0.0 and li.gear_ratio == 1.0

    @pytest.mark.parametrize("mass", [0.0, -1.5])
    def test_nonpositive_mass_rejected(self, mass):
        with pytest.raises(RobotModelError, match="mass must be positive"):
            _valid_inertia(mass=mass)

    def test_com_must_have_three_entries(self):
        with pytest.raises(RobotModelError, match="inertia.com"):
            _valid_inertia(com=(0.1, 0.2))

    def test_tensor_must_have_nine_entries(self):
        with pytest.raises(RobotModelError, match="inertia.tensor"):
            _valid_inertia(tensor=(1.0,) * 6)

    def test_asymmetric_tensor_rejected(self):
        t = (1.0, 0.3, 0.0, -0.3, 1.0, 0.0, 0.0, 0.0, 1.5)
        with pytest.raises(RobotModelError, match="symmetric"):
            _valid_inertia(tensor=t)

    def test_indefinite_tensor_rejected(self):
        t = (1.0, 0.0, 0.0, 0.0, -0.5, 0.0, 0.0, 0.0, 1.0)
        with pytest.raises(RobotModelError, match="positive semidefinite"):
            _valid_inertia(tensor=t)

    def test_triangle_inequality_enforced(self):
        # lambda_max > lambda_1 + lambda_2: no mass distribution produces this
        t = (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 3.0)
        with pytest.raises(RobotModelError, match="triangle inequality"):
            _valid_inertia(tensor=t)

    def test_plate_boundary_tensor_accepted(self):
        # izz == ixx + iyy sits exactly on the boundary and must pass
        li = _valid_inertia(tensor=_plate_tensor())
        assert li.tensor[8] == 1.0

    def test_tiny_asymmetry_symmetrized(self):
        t = np.diag([0.4, 0.6, 1.0])
        t[0, 1] = 1e-13
        li = _valid_inertia(tensor=tuple(t.reshape(-1)))
        stored = np.array(li.tensor).reshape(3, 3)
        assert np.array_equal(stored, stored.T)

    def test_negative_rotor_inertia_rejected(self):
        with pytest.raises(RobotModelError, match="rotor inertia"):
            _valid_inertia(rotor_inertia=-0.01)

    def test_random_point_cloud_tensors_valid(self, rng):
        # tensors assembled from point masses are realizable by construction
        for _ in range(25):
            tensor = point_cloud_inertia(rng)
            li = _valid_inertia(tensor=tuple(tensor.reshape(-1)))
            assert len(li.tensor) == 9


class TestRobotModel:
    def _two_link(self):
        dh1 = DHLink(a=1.0, alpha=0.0, d=0.0, theta_offset=0.0)
        dh2 = DHLink(a=0.0, alpha=0.0, d=0.3, theta_offset=0.0, kind="prismatic")
        li1 = _valid_inertia()
        li2 = _valid_inertia(mass=1.0, rotor_inertia=0.02, gear_ratio=50.0)
        return RobotModel([(dh1, li1), (dh2, li2)], gravity=(0.0, 0.0, -9.81))

    def test_requires_at_least_one_link(self):
        with pytest.raises(RobotModelError, match="at least one link"):
            RobotModel([])

    def test_gravity_must_have_three_entries(self):
        with pytest.raises(RobotModelError, match="gravity"):
            RobotModel([(DHLink(a=1.0, alpha=0.0, d=0.0, theta_offset=0.0), _valid_inertia())],
                       gravity=(0.0, -9.81))

    def test_dof_and_repr(self):
        model = self._two_link()
        assert model.dof == 2
        assert "RP" in repr(model)

    def test_array_packing(self):
        model = self._two_link()
        arr = model.arrays
        assert arr.kinds.dtype == np.int32
        assert arr.kinds.tolist() == [0, 1]
        # dh rows are (a, alpha, d, theta_offset)
        assert arr.dh[0].tolist() == [1.0, 0.0, 0.0, 0.0]
        assert arr.dh[1].tolist() == [0.0, 0.0, 0.3, 0.0]
        assert arr.mass.tolist() == [2.0, 1.0]
        assert arr.com.shape == (2, 3)
        assert arr.inertia.shape == (2, 3, 3)
        # rotor column stores gear_ratio^2 * rotor_inertia
        assert arr.rotor[0] == 0.0
        assert arr.rotor[1] == pytest.approx(50.0 * 50.0 * 0.02)
        assert arr.gravity.tolist() == [0.0, 0.0, -9.81]

    def test_arrays_are_read_only(self):
        arr = self._two_link().arrays
        for a in arr:
            with pytest.raises(ValueError):
                a[(0,) * a.ndim] = 99.0

    def test_default_gravity_points_down_z(self):
        model = RobotModel(
            [(DHLink(a=1.0, alpha=0.0, d=0.0, theta_offset=0.0), _valid_inertia())]
        )
        assert model.gravity == (0.0, 0.0, -9.81)


class TestJointState:
    def test_valid(self):
        s = JointState(q=[0.1, 0.2], qdot=[0.0, -1.0])
        assert s.q.shape == (2,)
        with pytest.raises(ValueError):
            s.q[0] = 5.0  # read-only

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError, match="equal length"):
            JointState(q=[0.1, 0.2], qdot=[0.0])

    def test_two_dimensional_rejected(self):
        with pytest.raises(ValueError):
            JointState(q=[[0.1]], qdot=[[0.0]])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            JointState(q=[float("inf")], qdot=[0.0])


# --- JSON schema -------------------------------------------------------------


def _model_dict():
    return {
        "gravity": [0.0, 0.0, -9.81],
        "links": [
            {
                "dh": {"a": 1.0, "alpha": 0.0, "d": 0.0, "theta_offset": 0.0,
                       "kind": "revolute"},
                "inertia": {"mass": 2.0, "com": [0.1, -0.2, 0.05],
                            "tensor": list(_plate_tensor())},
                "rotor": {"inertia": 0.01, "gear_ratio": 100.0},
            },
            {
                "dh": {"a": 0.5, "alpha": 1.5707963267948966, "d": 0.0,
                       "theta_offset": 0.0, "kind": "prismatic"},
                "inertia": {"mass": 1.0, "com": [0.0, 0.0, 0.0],
                            "tensor": list(_plate_tensor())},
            },
        ],
    }


class TestModelFromDict:
    def test_round_trip(self):
        model = robot_model_from_dict(_model_dict())
        assert model.dof == 2
        dh0, li0 = model.links[0]
        assert dh0.a == 1.0 and dh0.kind == "revolute"
        assert li0.rotor_inertia == 0.01 and li0.gear_ratio == 100.0
        # rotor block is optional and defaults to no rotor
        _, li1 = model.links[1]
        assert li1.rotor_inertia == 0.0 and li1.gear_ratio == 1.0

    def test_unknown_top_level_field(self):
        spec = _model_dict()
        spec["name"] = "arm"
        with pytest.raises(RobotModelError, match="unknown field.*name"):
            robot_model_from_dict(spec)

    def test_missing_links_field(self):
        spec = {"gravity": [0.0, 0.0, -9.81]}
        with pytest.raises(RobotModelError, match="missing required field 'links'"):
            robot_model_from_dict(spec)

    def test_unknown_link_field(self):
        spec = _model_dict()
        spec["links"][0]["colour"] = "red"
        with pytest.raises(RobotModelError, match=r"links\[0\].*colour"):
            robot_model_from_dict(spec)

    def test_missing_dh_key(self):
        spec = _model_dict()
        del spec["links"][1]["dh"]["alpha"]
        with pytest.raises(RobotModelError, match=r"links\[1\].dh.*alpha"):
            robot_model_from_dict(spec)

    def test_unknown_dh_key(self):
        spec = _model_dict()
        spec["links"][0]["dh"]["twist"] = 0.0
        with pytest.raises(RobotModelError, match=r"links\[0\].dh.*twist"):
            robot_model_from_dict(spec)

    def test_missing_inertia_key(self):
        spec = _model_dict()
        del spec["links"][0]["inertia"]["tensor"]
        with pytest.raises(RobotModelError, match="tensor"):
            robot_model_from_dict(spec)

    def test_rotor_requires_both_keys(self):
        spec = _model_dict()
        del spec["links"][0]["rotor"]["gear_ratio"]
        with pytest.raises(RobotModelError, match="gear_ratio"):
            robot_model_from_dict(spec)

    def test_bad_tensor_error_names_the_link(self):
        spec = _model_dict()
        spec["links"][1]["inertia"]["tensor"] = [1.0, 0, 0, 0, 1.0, 0, 0, 0, 3.0]
        with pytest.raises(RobotModelError, match=r"links\[1\].*triangle"):
            robot_model_from_dict(spec)

    def test_link_entry_must_be_object(self):
        spec = _model_dict()
        spec["links"][0] = "not a link"
        with pytest.raises(RobotModelError, match=r"links\[0\]"):
            robot_model_from_dict(spec)


class TestLoadRobotModel:
    def test_load_file(self, tmp_path):
        path = tmp_path / "arm.json"
        path.write_text(json.dumps(_model_dict()), encoding="utf-8")
        model = load_robot_model(path)
        assert model.dof == 2

    def test_invalid_json_reports_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"gravity": [0, 0, -9.81],\n  "links": [}', encoding="utf-8")
        with pytest.raises(RobotModelError, match="line 2"):
            load_robot_model(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_robot_model(tmp_path / "nope.json")
