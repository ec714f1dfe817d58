"""Secondary acceptance: the editor side of the contract.

Criterion 12 (schema parity) runs here against the shared golden file that
the frontend serializer is pinned to (frontend/tests/scene.test.ts asserts
the UI-authored scene saves byte-identically to golden/ui_authored_scene.json).
Criteria 13 (action gating) and 14 (run flow against a live service) live in
frontend/tests/editor.test.ts and frontend/tests/integration.test.ts.
"""

import json
import warnings
from pathlib import Path

import pytest

from crowdlab.cli import dispatch
from crowdlab.scene_io import SceneWarning, parse_scene, serialize_scene

GOLDEN = Path(__file__).parent.parent / "golden" / "ui_authored_scene.json"


def test_criterion_12_ui_authored_scene_passes_cli_validate(capsys):
    assert GOLDEN.exists(), "golden UI-authored scene missing"
    exit_code = dispatch(["validate", str(GOLDEN)])
    out = capsys.readouterr().out
    assert exit_code == 0
    assert "warning" not in out
    print("[criterion 12] PASS - UI-saved scene validates with exit 0 and zero warnings")


def test_golden_parses_without_warnings_and_reserializes_identically():
    text = GOLDEN.read_text(encoding="utf-8")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        scene = parse_scene(text)
    assert [w for w in caught if issubclass(w.category, SceneWarning)] == []
    assert serialize_scene(scene) == text

    doc = json.loads(text)
    assert len(doc["spawners"]) == 1
    assert len(doc["goals"]) == 1
    assert len(doc["presets"]) == 1
    editable = [o for o in doc["obstacles"] if not o["locked"]]
    assert len(editable) == 1
