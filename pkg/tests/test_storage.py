import json
import numpy as np
import pytest

from kl_emulator.exceptions import ChecksumError, StorageError, VersionMismatchError
from kl_emulator.repositories import FORMAT_VERSION, ArtifactRepository, load, load_envelope, save
from kl_emulator.repositories import artifact_repository, table_repository
from kl_emulator.repositories.files import read_csv
from kl_emulator.schemas.design import ParameterSpace, SeedRegistry
from kl_emulator.schemas.validation import EmulatorConfig, ValidationPlan
from kl_emulator.services import emulator_service, empirical_service, metrics_service, validation_service


RBF = EmulatorConfig(surrogate_kind="rbf_linear", truncation_energy=1.0)


def _rewrite(path, edit):
    envelope = json.loads(path.read_text())
    edit(envelope)
    path.write_text(json.dumps(envelope))


class TestEncoding:
    def test_array_buffer(self):
        encoded = artifact_repository.encode(np.arange(6, dtype=float).reshape(2, 3))
        assert encoded["dtype"] == "<f8"
        assert encoded["shape"] == [2, 3]
        np.testing.assert_array_equal(artifact_repository.decode(encoded), np.arange(6.0).reshape(2, 3))

    def test_big_endian_input(self):
        values = np.array([1.5, -2.25], dtype=">f8")
        encoded = artifact_repository.encode(values)
        assert encoded["dtype"] == "<f8"
        np.testing.assert_array_equal(artifact_repository.decode(encoded), [1.5, -2.25])

    def test_checksum_ignores_key_order(self):
        assert artifact_repository.checksum({"a": 1, "b": [2]}) == artifact_repository.checksum({"b": [2], "a": 1})


class TestRoundTrips:
    def test_trajectories(self, toy_data, tmp_path):
        save(toy_data, tmp_path / "trajectories.json")
        loaded = load(tmp_path / "trajectories.json", kind="trajectories")
        np.testing.assert_array_equal(loaded.values, toy_data.values)
        np.testing.assert_array_equal(loaded.coords, toy_data.coords)
        assert loaded.seeds == toy_data.seeds
        assert loaded.simulator == toy_data.simulator
        assert loaded.space == toy_data.space

    def test_basis(self, random_data, tmp_path):
        basis = empirical_service.build_basis(random_data)
        save(basis, tmp_path / "basis.json")
        loaded = load(tmp_path / "basis.json", kind="kl_basis")
        for field in ("eigenvalues", "eigenvectors", "xi", "coords", "mean"):
            np.testing.assert_array_equal(getattr(loaded, field), getattr(basis, field))

    @pytest.mark.parametrize(
        "config",
        [RBF, EmulatorConfig(truncation_energy=0.99), EmulatorConfig(pathway="cov_surrogate", pce_degree=1)],
    )
    def test_emulator_predicts_identically(self, config, toy_data, tmp_path):
        emu = emulator_service.fit_emulator(toy_data, config)
        save(emu, tmp_path / "emulator.json")
        loaded = load(tmp_path / "emulator.json", kind="emulator")

        points = toy_data.coords[:4]
        assert loaded.config == emu.config
        np.testing.assert_array_equal(
            emulator_service.predict_ensemble(loaded, points),
            emulator_service.predict_ensemble(emu, points),
        )

    @pytest.mark.parametrize("config", [RBF, EmulatorConfig(truncation_energy=0.99)])
    def test_refit_serializes_identically(self, config, toy_data, tmp_path):
        first = save(emulator_service.fit_emulator(toy_data, config), tmp_path / "first.json")
        second = save(emulator_service.fit_emulator(toy_data, config), tmp_path / "second.json")
        a, b = load_envelope(first), load_envelope(second)
        assert a.checksum == b.checksum
        assert a.payload == b.payload

    def test_validation_result(self, toy_data, tmp_path):
        result = validation_service.k_fold_validate(toy_data, ValidationPlan(k=3, emulator=RBF), rng_seed=0)
        save(result, tmp_path / "validation.json")
        assert load(tmp_path / "validation.json", kind="validation_summary") == result

    def test_metric_reports(self, tmp_path):
        reports = [metrics_service.compare([0, 1, 2], [1, 2, 3], point=[0.5]), metrics_service.compare([0], [0])]
        save(reports, tmp_path / "report.json")
        assert load(tmp_path / "report.json", kind="metric_report") == reports

    def test_repository_paths(self, tmp_path):
        repo = ArtifactRepository(tmp_path / "out")
        assert not repo.exists("seeds.json")
        repo.save(SeedRegistry.consecutive(3), "seeds.json", config={"n": 3})
        assert repo.exists("seeds.json")
        assert repo.load("seeds.json").seeds == (1, 2, 3)
        assert load_envelope(repo.path("seeds.json")).provenance.config == {"n": 3}

    def test_provenance_hashes_inputs(self, tmp_path):
        source = save(SeedRegistry.consecutive(2), tmp_path / "seeds.json")
        target = save(SeedRegistry.consecutive(4), tmp_path / "more.json", inputs=[source])
        hashes = load_envelope(target).provenance.input_hashes
        assert hashes == {str(source): artifact_repository.file_hash(source)}

    def test_no_temp_files_left(self, toy_data, tmp_path):
        save(toy_data, tmp_path / "trajectories.json")
        save(toy_data, tmp_path / "trajectories.json")
        assert [p.name for p in tmp_path.iterdir()] == ["trajectories.json"]


class TestCorruption:
    @pytest.fixture
    def artifact(self, tmp_path):
        return save(SeedRegistry.consecutive(5), tmp_path / "seeds.json")

    def test_truncated(self, artifact):
        text = artifact.read_text()
        artifact.write_text(text[: len(text) // 2])
        with pytest.raises(ChecksumError, match="truncated or corrupt"):
            load(artifact)

    def test_tampered_payload(self, artifact):
        _rewrite(artifact, lambda e: e["payload"]["seeds"].__setitem__(0, 99))
        with pytest.raises(ChecksumError, match="checksum mismatch"):
            load(artifact)

    def test_newer_format_version(self, artifact):
        _rewrite(artifact, lambda e: e.__setitem__("format_version", FORMAT_VERSION + 1))
        with pytest.raises(VersionMismatchError, match="version 2 .*version 1") as info:
            load(artifact)
        assert (info.value.found, info.value.supported) == (2, 1)

    def test_missing_file(self, tmp_path):
        with pytest.raises(StorageError, match="artifact not found"):
            load(tmp_path / "nope.json")

    def test_wrong_kind(self, artifact):
        with pytest.raises(StorageError, match="holds a 'seeds' artifact, expected 'emulator'"):
            load(artifact, kind="emulator")

    def test_unstorable(self, tmp_path):
        with pytest.raises(StorageError, match="cannot store"):
            save(object(), tmp_path / "x.json")


class TestTables:
    def test_design_csv(self, toy_design, tmp_path):
        path = table_repository.write_design_csv(toy_design, tmp_path / "design.csv")
        assert path.read_text().splitlines()[0] == "x1,x2,x3"
        loaded = table_repository.read_design_csv(path, toy_design.space)
        np.testing.assert_array_equal(loaded.points, toy_design.points)

    def test_design_csv_header_mismatch(self, toy_design, tmp_path):
        path = table_repository.write_design_csv(toy_design, tmp_path / "design.csv")
        with pytest.raises(StorageError, match="expected columns"):
            table_repository.read_design_csv(path, ParameterSpace.cube(0.0, 1.0, 2))

    def test_seeds_json(self, tmp_path):
        path = table_repository.write_seeds_json(SeedRegistry(seeds=(4, 8, 15)), tmp_path / "seeds.json")
        assert json.loads(path.read_text()) == [4, 8, 15]
        assert table_repository.read_seeds_json(path).seeds == (4, 8, 15)

    def test_trajectories_csv(self, toy_data, tmp_path):
        path = table_repository.write_trajectories_csv(toy_data, tmp_path / "trajectories.csv")
        header, rows = read_csv(path)
        assert header[:4] == ["x1", "x2", "x3", "seed_1"]
        assert len(header) == 3 + toy_data.n_seeds
        np.testing.assert_array_equal(rows[:, 3:], toy_data.values)
        sidecar = json.loads((tmp_path / "trajectories.json").read_text())
        assert sidecar["simulator"] == "toy3d"
        assert sidecar["seeds"] == list(toy_data.seeds)

    def test_report_csv(self, tmp_path):
        reports = [
            metrics_service.compare([0, 1, 2], [0, 1, 2], bins=3, point=[0.25, 0.75]),
            metrics_service.compare([0, 1, 2], [5, 6, 7], bins=3, point=[0.5, 0.5]),
        ]
        header, rows = read_csv(table_repository.write_report_csv(reports, tmp_path / "report.csv"))
        assert header == ["x1", "x2", "hist_int", "hellinger", "jsd", "ks_stat", "ks_reject"]
        np.testing.assert_allclose(rows[:, 0], [0.25, 0.5])
        np.testing.assert_array_equal(rows[:, -1], [0.0, 1.0])

    def test_summary_table(self, toy_data, tmp_path):
        result = validation_service.k_fold_validate(toy_data, ValidationPlan(k=3, emulator=RBF), rng_seed=0)
        path = table_repository.write_summary_table([("kfold", 12, 20, result.summary)], tmp_path / "summary.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "method,M,N,hist_int,hellinger,jsd,ks_reject_rate"
        assert lines[1].startswith("kfold,12,20,")

    def test_cdf_pairs(self, tmp_path):
        rows = table_repository.cdf_pair_rows(3, [0.0, 1.0], [1.0, 2.0])
        np.testing.assert_array_equal(rows[:, 1], [0.0, 1.0, 2.0])
        np.testing.assert_allclose(rows[:, 2], [0.5, 1.0, 1.0])
        np.testing.assert_allclose(rows[:, 3], [0.0, 0.5, 1.0])
        header, _ = read_csv(table_repository.write_cdf_pairs([rows], tmp_path / "cdf.csv"))
        assert header == ["point", "value", "cdf_predicted", "cdf_reference"]

    def test_histograms(self, tmp_path):
        p, q = metrics_service.shared_histogram([0.0, 1.0], [1.0, 1.0], bins=2)
        rows = table_repository.histogram_rows(0, p, q)
        np.testing.assert_allclose(rows[:, 1:3], [[0.0, 0.5], [0.5, 1.0]])
        np.testing.assert_allclose(rows[:, 3:], [[0.5, 0.0], [0.5, 1.0]])
        header, loaded = read_csv(table_repository.write_histograms([rows], tmp_path / "hist.csv"))
        assert header == ["point", "left", "right", "mass_predicted", "mass_reference"]
        np.testing.assert_array_equal(loaded, rows)
