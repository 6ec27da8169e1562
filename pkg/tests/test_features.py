"""FeatureDataset container and the binary feature-file format."""

import struct

import numpy as np
import pytest

from graspkit.core import GraspDistribution
from graspkit.errors import (
    BadMagicError,
    InvalidInputError,
    LengthMismatchError,
    ManifestMismatchError,
    ShapeMismatchError,
    UnsupportedVersionError,
)
from graspkit.features import (
    FeatureDataset,
    manifest_path,
    read_feature_file,
    write_feature_file,
)


def sample_dataset(n=6, dim=4, seed=0):
    rng = np.random.default_rng(seed)
    # f32-representable values so the on-disk round trip is exact
    feats = rng.standard_normal((n, dim)).astype(np.float32).astype(np.float64)
    labels = []
    for _ in range(n):
        v = rng.uniform(0.05, 1.0, size=5)
        labels.append(GraspDistribution(tuple(v / v.sum())))
    return FeatureDataset(
        image_ids=tuple(f"img-{i}" for i in range(n)),
        features=feats,
        labels=tuple(labels),
    )


def test_dataset_validation():
    labels = (GraspDistribution.uniform(),) * 2
    with pytest.raises(ShapeMismatchError):
        FeatureDataset(("a",), np.zeros((2, 3)), labels)
    with pytest.raises(ShapeMismatchError):
        FeatureDataset(("a", "b"), np.zeros(4), labels)
    with pytest.raises(InvalidInputError):
        FeatureDataset(("a", "b"), np.array([[1.0, np.nan], [0, 0]]), labels)


def test_dataset_iteration_and_dim():
    ds = sample_dataset(3, 5)
    assert len(ds) == 3 and ds.feature_dim == 5
    rows = list(ds)
    assert rows[1][0] == "img-1"
    assert np.array_equal(rows[1][1], ds.features[1])
    assert rows[1][2] == ds.labels[1]


def test_subset_preserves_alignment():
    ds = sample_dataset(6, 4)
    sub = ds.subset([4, 1, 1])
    assert sub.image_ids == ("img-4", "img-1", "img-1")
    assert np.array_equal(sub.features[0], ds.features[4])
    assert sub.labels[2] == ds.labels[1]
    empty = ds.subset([])
    assert len(empty) == 0 and empty.feature_dim == 4


def test_feature_file_round_trip(tmp_path):
    ds = sample_dataset()
    path = tmp_path / "feats.gfea"
    write_feature_file(path, ds, comments=["seed = 0", "source = test"])
    back = read_feature_file(path)
    assert back.image_ids == ds.image_ids
    assert np.array_equal(back.features, ds.features)
    assert back.labels == ds.labels
    text = manifest_path(path).read_text()
    assert text.startswith("# seed = 0\n# source = test\n")
    assert text.splitlines()[2] == "row,image_id,p0,p1,p2,p3,p4"


def test_feature_file_header_layout(tmp_path):
    ds = sample_dataset(3, 7)
    path = tmp_path / "feats.gfea"
    write_feature_file(path, ds)
    blob = path.read_bytes()
    magic, version, rows, dim = struct.unpack_from("<4sHII", blob)
    assert (magic, version, rows, dim) == (b"GFEA", 1, 3, 7)
    assert len(blob) == struct.calcsize("<4sHII") + 3 * 7 * 4


def test_read_rejects_bad_magic(tmp_path):
    path = tmp_path / "feats.gfea"
    write_feature_file(path, sample_dataset())
    blob = bytearray(path.read_bytes())
    blob[:4] = b"NOPE"
    path.write_bytes(bytes(blob))
    with pytest.raises(BadMagicError):
        read_feature_file(path)
    path.write_bytes(b"GF")
    with pytest.raises(BadMagicError):
        read_feature_file(path)


def test_read_rejects_unknown_version(tmp_path):
    path = tmp_path / "feats.gfea"
    write_feature_file(path, sample_dataset())
    blob = bytearray(path.read_bytes())
    blob[4:6] = (9).to_bytes(2, "little")
    path.write_bytes(bytes(blob))
    with pytest.raises(UnsupportedVersionError):
        read_feature_file(path)


def test_read_rejects_truncated_payload(tmp_path):
    path = tmp_path / "feats.gfea"
    write_feature_file(path, sample_dataset())
    blob = path.read_bytes()
    path.write_bytes(blob[:-4])
    with pytest.raises(LengthMismatchError):
        read_feature_file(path)


def test_read_requires_manifest(tmp_path):
    path = tmp_path / "feats.gfea"
    write_feature_file(path, sample_dataset())
    manifest_path(path).unlink()
    with pytest.raises(ManifestMismatchError):
        read_feature_file(path)


def test_read_rejects_manifest_row_count(tmp_path):
    path = tmp_path / "feats.gfea"
    write_feature_file(path, sample_dataset())
    mpath = manifest_path(path)
    lines = mpath.read_text().splitlines()
    mpath.write_text("\n".join(lines[:-1]) + "\n")  # drop one row
    with pytest.raises(ManifestMismatchError):
        read_feature_file(path)


def test_read_rejects_out_of_order_manifest(tmp_path):
    path = tmp_path / "feats.gfea"
    write_feature_file(path, sample_dataset(3))
    mpath = manifest_path(path)
    lines = mpath.read_text().splitlines()
    lines[1], lines[2] = lines[2], lines[1]  # swap row 0 and row 1
    mpath.write_text("\n".join(lines) + "\n")
    with pytest.raises(ManifestMismatchError):
        read_feature_file(path)


def test_read_rejects_manifest_bad_header(tmp_path):
    path = tmp_path / "feats.gfea"
    write_feature_file(path, sample_dataset(2))
    mpath = manifest_path(path)
    body = mpath.read_text().splitlines()[1:]
    mpath.write_text("\n".join(["row,id,p0,p1,p2,p3,p4"] + body) + "\n")
    with pytest.raises(ManifestMismatchError):
        read_feature_file(path)


def test_manifest_path_naming():
    assert str(manifest_path("out/feats.gfea")).endswith("feats.gfea.manifest.csv")
