import json

import numpy as np
import pytest

from sharpfield.geom import frame_to_e3
from sharpfield.scene import (
    FIXTURES,
    Scene,
    fixture_path,
    load_expectations,
    load_scene,
    resolve_scene_path,
    scene_from_dict,
)


@pytest.mark.parametrize("name", FIXTURES)
def test_every_fixture_has_expectations(name):
    scene = load_scene(name)
    exp = load_expectations(name)
    assert exp["fixture"] == name == scene.name
    for row in exp["checks"]:
        assert row["status"] in ("verified", "reference-diff")
        if row["status"] == "reference-diff":
            assert "reference" in row


def test_fixture_lookup_forms():
    assert resolve_scene_path("example2") == fixture_path("example2")
    assert resolve_scene_path("fixtures/example2.json") == fixture_path("example2")
    with pytest.raises(FileNotFoundError):
        resolve_scene_path("no_such_scene")


def test_round_trip_through_dict(tmp_path):
    scene = load_scene("example3d")
    path = tmp_path / "copy.json"
    path.write_text(json.dumps(scene.to_dict()))
    again = load_scene(path)
    assert np.array_equal(again.points, scene.points)
    assert again.params == scene.params


def test_missing_field():
    with pytest.raises(ValueError, match="focal_length_m"):
        scene_from_dict({"coc_m": 3e-5, "points": []})


def test_invalid_values():
    with pytest.raises(ValueError):
        Scene(0.05, 0.1, [[0, 0, 1]])
    with pytest.raises(ValueError):
        Scene(0.05, 3e-5, [[0, 0, 1]], frame="polar")


def test_sensor_aligned_frame_from_tilted_sensor():
    # the same object seen by a camera whose sensor normal is tilted: aligned coordinates undo it
    pts = np.array([[0, -0.1, 0.12], [0, 0, 0.19], [0, -0.0525, 0.17]])
    n = np.array([0.0, -np.sin(0.1), np.cos(0.1)])
    R = frame_to_e3(n)
    scene = Scene(0.05, 3e-5, pts @ R.T, sensor_normal=n)
    assert np.allclose(scene.aligned_points(), pts)


def test_global_frame_uses_camera_pose():
    scene = Scene(
        0.05,
        3e-5,
        [[0.1, 0.2, 1.3]],
        frame="global",
        camera={"L": [0.1, 0.2, 0.3], "S": [0.1, 0.2, 0.2], "rear": [0, 0]},
    )
    assert np.allclose(scene.aligned_points(), [[0, 0, 1.0]])
