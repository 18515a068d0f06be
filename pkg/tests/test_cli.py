import pytest

from tfkt.services.dataset_service import DatasetService
from tfkt.utils.cli_options import resolve_run_config

SMALL_NETWORK = [
    "--pretrain-epochs", "20", "--epochs", "2", "--k", "2", "--seed", "3",
    "--generator-hidden", "16", "--feature-dim", "8", "--classifier-hidden", "8",
]


def _synth(app, runner, tmp_path, name="task", seed="7"):
    source = tmp_path / f"{name}.source.fkt"
    target = tmp_path / f"{name}.target.fkt"
    result = runner.invoke(app, [
        "synth", "--classes", "4", "--dim", "6", "--per-class-source", "20",
        "--per-class-target", "15", "--minority", "3", "--shots", "2", "--angle", "0.3",
        "--translation", "0.5", "--noise", "0.1", "--seed", seed,
        "--source-out", str(source), "--target-out", str(target),
    ])
    assert result.exit_code == 0, result.stderr
    return source, target


@pytest.fixture(name="task_files")
def task_files_fixture(app, runner, tmp_path):
    return _synth(app, runner, tmp_path)


def _train_args(tmp_path, source, target):
    return [
        "train", "--source", str(source), "--target", str(target),
        "--report", str(tmp_path / "report.jsonl"), "--metrics", str(tmp_path / "metrics.tsv"),
        "--checkpoint", str(tmp_path / "model.ckpt"), "--minority", "3", "--shots", "2",
        *SMALL_NETWORK,
    ]


def test_synth_is_deterministic(app, runner, tmp_path):
    first_source, first_target = _synth(app, runner, tmp_path, "first")
    second_source, second_target = _synth(app, runner, tmp_path, "second")
    assert first_source.read_bytes() == second_source.read_bytes()
    assert first_target.read_bytes() == second_target.read_bytes()
    assert DatasetService.load_dataset(str(first_source)).size == 3 * 20 + 2
    other_source, _ = _synth(app, runner, tmp_path, "other", seed="8")
    assert other_source.read_bytes() != first_source.read_bytes()


def test_synth_without_required_option_is_a_usage_error(app, runner, tmp_path):
    result = runner.invoke(app, ["synth", "--classes", "4", "--per-class-source", "5",
                                 "--per-class-target", "5", "--source-out",
                                 str(tmp_path / "s"), "--target-out", str(tmp_path / "t")])
    assert result.exit_code == 2


def test_train_writes_report_metrics_and_checkpoint(app, runner, tmp_path, task_files):
    result = runner.invoke(app, _train_args(tmp_path, *task_files))
    assert result.exit_code == 0, result.stderr
    report_lines = (tmp_path / "report.jsonl").read_text(encoding="utf-8").splitlines()
    assert len(report_lines) == 2
    assert report_lines[0].startswith('{"epoch":1,"m_s":')
    metrics = (tmp_path / "metrics.tsv").read_text(encoding="utf-8").splitlines()
    assert metrics[0].startswith("task\tseed\tepoch\ta_f\ta_m\ta_o")
    assert metrics[1].startswith("task\t3\t2\t")
    assert (tmp_path / "model.ckpt").read_text(encoding="utf-8").startswith("#fkt-checkpoint v1")


def test_eval_reproduces_the_training_metrics(app, runner, tmp_path, task_files):
    assert runner.invoke(app, _train_args(tmp_path, *task_files)).exit_code == 0
    result = runner.invoke(app, [
        "eval", "--checkpoint", str(tmp_path / "model.ckpt"), "--target", str(task_files[1]),
        "--minority", "3", "--shots", "2", "--seed", "3", "--epoch", "2",
    ])
    assert result.exit_code == 0, result.stderr
    assert result.stdout == (tmp_path / "metrics.tsv").read_text(encoding="utf-8")


def test_missing_input_fails_in_dataset_loading(app, runner, tmp_path, task_files):
    result = runner.invoke(app, _train_args(tmp_path, task_files[0], tmp_path / "absent.fkt"))
    assert result.exit_code == 1
    assert "dataset loading" in result.stderr


def test_eval_on_unlabeled_target_fails(app, runner, tmp_path, task_files):
    assert runner.invoke(app, _train_args(tmp_path, *task_files)).exit_code == 0
    target = DatasetService.load_dataset(str(task_files[1]))
    unlabeled = tmp_path / "unlabeled.fkt"
    lines = task_files[1].read_text(encoding="utf-8").splitlines()
    unlabeled.write_text(
        "\n".join([lines[0]] + ["-\t" + line.split("\t", 1)[1] for line in lines[1:]]) + "\n",
        encoding="utf-8",
    )
    assert target.size == len(lines) - 1
    result = runner.invoke(app, ["eval", "--checkpoint", str(tmp_path / "model.ckpt"),
                                 "--target", str(unlabeled), "--minority", "3"])
    assert result.exit_code == 1
    assert "evaluation failed" in result.stderr


def test_out_of_range_value_is_a_validation_error(app, runner, tmp_path, task_files):
    result = runner.invoke(app, _train_args(tmp_path, *task_files) + ["--alpha", "1.5"])
    assert result.exit_code == 2
    assert "validation_error" in result.stderr


def test_unknown_config_file_key_is_rejected(app, runner, tmp_path, task_files):
    config = tmp_path / "run.cfg"
    config.write_text("gamma=3\n", encoding="utf-8")
    result = runner.invoke(app, _train_args(tmp_path, *task_files) + ["--config", str(config)])
    assert result.exit_code == 2


def test_help_lists_keys_with_defaults(app, runner):
    result = runner.invoke(app, ["train", "--help"])
    assert result.exit_code == 0
    assert "--lambda" in result.output
    assert "[default: 0.1]" in result.output
    assert "--no-cda-mix" in result.output


def test_flags_override_the_config_file(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("# sensitivity run\nlambda=0.5\nk=3\nsource=s.fkt\ntarget=t.fkt\n",
                      encoding="utf-8")
    run_config = resolve_run_config(
        {"lambda": 0.2, "k": None, "ablate_use_cda_s": True, "ablate_use_cpa": False},
        str(config),
    )
    assert run_config.hyperparams.lambda_weight == 0.2
    assert run_config.hyperparams.mix_count == 3
    assert run_config.flags.use_cda_s is False
    assert run_config.flags.use_cpa is True
    assert run_config.source == "s.fkt"
    assert run_config.report == "report.jsonl"


def test_graph_dump(app, runner, tmp_path, task_files):
    prefix = tmp_path / "graph"
    result = runner.invoke(app, ["graph", "--input", str(task_files[1]), "--alpha", "0.3",
                                 "--output-prefix", str(prefix)])
    assert result.exit_code == 0, result.stderr
    assert "sigma^2=" in result.stdout
    propagator = DatasetService.load_dataset(f"{prefix}.H.fkt")
    assert propagator.embeddings.shape == (60, 60)


def test_augment_dump_tags_provenance(app, runner, tmp_path, task_files):
    output = tmp_path / "pool.fkt"
    result = runner.invoke(app, ["augment", "--source", str(task_files[0]),
                                 "--target", str(task_files[1]), "--minority", "3",
                                 "--shots", "2", "--k", "3", "--output", str(output)])
    assert result.exit_code == 0, result.stderr
    tags = [line.rsplit("\t", 1)[1] for line in
            output.read_text(encoding="utf-8").splitlines()[1:]]
    assert tags.count("REAL") == 62
    assert tags.count("EP") == tags.count("KP") == 2
    assert tags.count("MIX") == 6


def test_features_dump_after_training(app, runner, tmp_path, task_files):
    assert runner.invoke(app, _train_args(tmp_path, *task_files)).exit_code == 0
    prefix = tmp_path / "features"
    result = runner.invoke(app, [
        "features", "--source", str(task_files[0]), "--target", str(task_files[1]),
        "--checkpoint", str(tmp_path / "model.ckpt"), "--minority", "3", "--shots", "2",
        "--k", "2", "--seed", "3", "--output-prefix", str(prefix),
    ])
    assert result.exit_code == 0, result.stderr
    target_features = DatasetService.load_dataset(f"{prefix}.target.fkt")
    assert target_features.embeddings.shape == (60, 8)


def test_sweep_writes_one_row_per_setting(app, runner, tmp_path, task_files):
    output = tmp_path / "sweep.tsv"
    args = _train_args(tmp_path, *task_files)[1:]
    result = runner.invoke(app, ["sweep", *args, "--lambdas", "0,0.1", "--ks", "1",
                                 "--output", str(output)])
    assert result.exit_code == 0, result.stderr
    rows = output.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "lambda\tk\tseed\ta_f\ta_m\ta_o"
    assert [row.split("\t")[:3] for row in rows[1:]] == [["0.0", "1", "3"], ["0.1", "1", "3"]]


def test_eval_breakdown_appends_classifier_columns(app, runner, tmp_path, task_files):
    assert runner.invoke(app, _train_args(tmp_path, *task_files)).exit_code == 0
    result = runner.invoke(app, [
        "eval", "--checkpoint", str(tmp_path / "model.ckpt"), "--target", str(task_files[1]),
        "--minority", "3", "--breakdown",
    ])
    assert result.exit_code == 0, result.stderr
    header, row = result.stdout.splitlines()
    assert header.split("\t")[-4:] == ["c_n_minority", "c_n_majority",
                                       "c_p_minority", "c_p_majority"]
    assert len(row.split("\t")) == len(header.split("\t")) == 14
