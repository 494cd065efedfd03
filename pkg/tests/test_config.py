import pytest

import spgd
from spgd.anova import AnovaConfig
from spgd.benchmarks import LorenzConfig
from spgd.config.settings import FitConfig, Selection, read_config_file
from spgd.types import CouplingKind, Method, SelectionKind
from spgd.validator import ErrorStore, ValidationError, merge_errors


class TestBaseConfig:
    def test_defaults_and_overrides(self):
        config = FitConfig(max_modes=7)
        assert config.max_modes == 7
        assert config.max_degree == 4
        assert config.method is Method.SPGD

    def test_unknown_key(self):
        with pytest.raises(ValidationError) as info:
            FitConfig(max_mode=7)
        assert "max_mode" in info.value.normalized_messages()

    def test_undeclared_attribute_reads_none(self):
        assert FitConfig().not_a_setting is None

    def test_assignment_is_rejected(self):
        config = FitConfig()
        with pytest.raises(ValidationError) as info:
            config.max_modes = 3
        assert info.value.field_name == "max_modes"
        assert config.max_modes == 20

    def test_replace_keeps_other_values(self):
        config = FitConfig(max_modes=7).replace(seed=3)
        assert (config.max_modes, config.seed) == (7, 3)

    def test_keys_include_base_settings(self):
        keys = FitConfig.keys()
        assert keys[:2] == ("debug", "seed")
        assert "selection" in keys

    def test_get_config(self):
        assert spgd.get_config(method="rspgd").method is Method.RSPGD


class TestFitConfig:
    def test_strings_become_enums(self):
        config = FitConfig(method="s2pgd", family="monomial", selection="one-se:10")
        assert config.method is Method.S2PGD
        assert config.selection == Selection(SelectionKind.ONE_SE_KFOLD, folds=10)

    def test_all_errors_are_collected(self):
        with pytest.raises(ValidationError) as info:
            FitConfig(method="nope", max_modes=0, alpha=2.0, initial_degree=5, max_degree=2)
        messages = info.value.normalized_messages()
        assert {"method", "max_modes", "alpha", "max_degree"} <= set(messages)

    def test_sparse_dims_are_zero_based(self):
        assert FitConfig(sparse_dims=[1, 2]).sparse_dims == (1, 2)
        with pytest.raises(ValidationError):
            FitConfig(sparse_dims=[-1])
        assert FitConfig(method="s2pgd", sparse_dims="auto").scans_dimensions

    @pytest.mark.parametrize(
        "chi_lim, dim, size, expected",
        [(None, 0, 9, 5), (None, 1, 4, 2), (3, 0, 9, 3), ((2, 4), 1, 9, 4), ((2,), 1, 9, 5)],
    )
    def test_chi_limit(self, chi_lim, dim, size, expected):
        assert FitConfig(chi_lim=chi_lim).chi_limit(dim, size) == expected

    def test_alpha_grid(self):
        assert FitConfig(alpha=[0.1, 0.5]).alphas == (0.1, 0.5)
        assert FitConfig().alphas == (0.0,)


class TestSelection:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("cv:5", Selection(SelectionKind.KFOLD, folds=5)),
            ("cv", Selection(SelectionKind.KFOLD, folds=5)),
            ("split:0.7", Selection(SelectionKind.SPLIT, ratio=0.7)),
            ("train", Selection(SelectionKind.TRAIN)),
        ],
    )
    def test_parse(self, text, expected):
        assert Selection.parse(text) == expected

    @pytest.mark.parametrize("text", ["loo", "cv:x", "split:abc"])
    def test_invalid(self, text):
        with pytest.raises(ValidationError):
            Selection.parse(text)

    def test_str(self):
        assert str(Selection.parse("one-se:3")) == "one-se:3"

    def test_single_fold_rejected(self):
        with pytest.raises(ValidationError):
            FitConfig(selection="cv:1")


class TestOtherConfigs:
    def test_anova(self):
        assert AnovaConfig().coupling_kind(2) is CouplingKind.DENSE
        assert AnovaConfig().coupling_kind(5) is CouplingKind.RSPGD
        assert AnovaConfig(coupling="s2pgd").coupling_kind(2) is CouplingKind.S2PGD
        with pytest.raises(ValidationError):
            AnovaConfig(univariate="wavelet")

    def test_lorenz(self):
        with pytest.raises(ValidationError) as info:
            LorenzConfig(dt=0.0, construction_ratio=1.0)
        assert {"dt", "construction_ratio"} <= set(info.value.normalized_messages())


class TestConfigFile:
    def test_parse(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("# comment\n--method = rspgd\n\nalpha = 0.1  # trailing\n")
        assert read_config_file(path) == {"method": "rspgd", "alpha": "0.1"}

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("method rspgd\n")
        with pytest.raises(ValidationError) as info:
            read_config_file(path)
        assert "line 1" in info.value.normalized_messages()


class TestErrorStore:
    def test_collects_per_field(self):
        store = ErrorStore()
        store.check(False, "first", "a")
        store.check(False, "second", "a")
        assert store.check(True, "never", "b")
        assert store.errors == {"a": ["first", "second"]}
        with pytest.raises(ValidationError):
            store.raise_if_any()

    def test_empty_store_does_not_raise(self):
        ErrorStore().raise_if_any()

    def test_merge(self):
        assert merge_errors({"a": ["x"]}, {"a": ["y"], "b": ["z"]}) == {"a": ["x", "y"], "b": ["z"]}
        assert merge_errors(["x"], {"b": ["z"]}) == {"b": ["z"], "_schema": ["x"]}
        assert merge_errors("x", "y") == ["x", "y"]
