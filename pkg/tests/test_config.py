import pytest

from groupaes.config import (
    Config,
    ConfigError,
    DatasetConfig,
    GenericConfig,
    MlConfig,
    ThresholdConfig,
    load_config,
)


class TestValidation:
    def test_defaults_are_valid(self):
        cfg = Config()
        assert cfg.thresholds.occlusion == (0.6,) * 7
        assert cfg.thresholds.blur == 50.0
        assert cfg.ml.svm_gamma == 2.0
        assert cfg.ml.rf_trees == 130
        assert cfg.dataset.min_raters == 5

    def test_occlusion_arity(self):
        with pytest.raises(ConfigError):
            ThresholdConfig(occlusion=(0.5, 0.5))

    def test_occlusion_domain(self):
        with pytest.raises(ConfigError):
            ThresholdConfig(occlusion=(0.5,) * 6 + (1.5,))

    def test_yaw_window_order(self):
        with pytest.raises(ConfigError):
            ThresholdConfig(yaw_lo=30.0, yaw_hi=-30.0)

    def test_asymmetric_yaw_window_allowed(self):
        t = ThresholdConfig(yaw_lo=-20.0, yaw_hi=40.0)
        assert (t.yaw_lo, t.yaw_hi) == (-20.0, 40.0)

    def test_smile_branch_values(self):
        from groupaes.config import GroupConfig

        with pytest.raises(ConfigError):
            GroupConfig(smile_branch="maybe")

    def test_kmeans_bounds(self):
        with pytest.raises(ConfigError):
            GenericConfig(kmeans_k=0)

    def test_ml_bounds(self):
        with pytest.raises(ConfigError):
            MlConfig(svm_c=0.0)
        with pytest.raises(ConfigError):
            MlConfig(cv_folds=1)

    def test_dataset_bounds(self):
        with pytest.raises(ConfigError):
            DatasetConfig(min_raters=10, max_raters=5)


class TestTomlLoading:
    def test_full_round_trip(self, tmp_path):
        path = tmp_path / "config.toml"
        path.write_text(
            """
[faces]
occlusion = [0.5, 0.5, 0.7, 0.7, 0.4, 0.6, 0.6]
blur = 40.0
yaw_lo = -25.0
yaw_hi = 25.0

[group]
smile_branch = "prose"

[generic]
seed = 99
kmeans_restarts = 4

[ml]
svm_gamma = 1.5
select_k = 10

[dataset]
min_raters = 2
"""
        )
        cfg = load_config(path)
        assert cfg.thresholds.occlusion == (0.5, 0.5, 0.7, 0.7, 0.4, 0.6, 0.6)
        assert cfg.thresholds.blur == 40.0
        assert cfg.group.smile_branch == "prose"
        assert cfg.generic.seed == 99
        assert cfg.generic.kmeans_restarts == 4
        assert cfg.ml.svm_gamma == 1.5
        assert cfg.ml.select_k == 10
        assert cfg.dataset.min_raters == 2
        # untouched sections keep defaults
        assert cfg.ml.rf_trees == 130

    def test_unknown_section_rejected(self, tmp_path):
        path = tmp_path / "config.toml"
        path.write_text("[advanced]\nmagic = 1\n")
        with pytest.raises(ConfigError, match="advanced"):
            load_config(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "config.toml"
        path.write_text("[ml]\nsvm_gama = 2.0\n")
        with pytest.raises(ConfigError, match="svm_gama"):
            load_config(path)

    def test_cli_accepts_config(self, tmp_path, capsys):
        from groupaes.cli import main
        from groupaes.synthetic import write_corpus

        write_corpus(tmp_path / "imgs", seed=2)
        config = tmp_path / "config.toml"
        config.write_text("[generic]\nkmeans_restarts = 2\nseed = 5\n")
        out = tmp_path / "f.csv"
        code = main(
            ["--config", str(config), "extract", str(tmp_path / "imgs"), "--out", str(out)]
        )
        assert code == 0
        assert len(out.read_text().splitlines()) == 4

    def test_cli_bad_config_is_validation_error(self, tmp_path, capsys):
        from groupaes.cli import main

        config = tmp_path / "config.toml"
        config.write_text("[nope]\nx = 1\n")
        code = main(
            ["--config", str(config), "extract", str(tmp_path), "--out", str(tmp_path / "f.csv")]
        )
        assert code == 2
