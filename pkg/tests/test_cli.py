"""Exit-code and output-format contract for every subcommand."""

import subprocess
import sys

from support import FIXTURES, golden, run_cli


class TestValidate:
    def test_fixture_corpus_is_clean(self):
        code, out, err = run_cli(["validate", FIXTURES / "earl"])
        assert code == 0
        assert out == ""
        assert err == ""

    def test_single_file(self):
        code, _, _ = run_cli(["validate", FIXTURES / "earl" / "fig1.xml"])
        assert code == 0

    def test_strict_with_profile(self):
        code, _, err = run_cli(
            ["validate", FIXTURES / "earl", "--profile", FIXTURES / "profiles" / "basic.xml", "--strict"]
        )
        assert code == 0, err

    def test_parse_error_exits_2(self, tmp_path):
        (tmp_path / "broken.xml").write_bytes(b"<emotion")
        code, _, err = run_cli(["validate", tmp_path])
        assert code == 2
        assert "MALFORMED_XML" in err

    def test_validation_error_exits_2(self, tmp_path):
        (tmp_path / "bad.xml").write_bytes(b'<emotion category="x" intensity="1.7"/>')
        code, _, err = run_cli(["validate", tmp_path])
        assert code == 2
        assert "RANGE" in err

    def test_unknown_category_against_profile(self, tmp_path):
        (tmp_path / "odd.xml").write_bytes(b'<emotion category="smugness"/>')
        code, _, err = run_cli(
            ["validate", tmp_path, "--profile", FIXTURES / "profiles" / "basic.xml"]
        )
        assert code == 2
        assert "UNKNOWN_CATEGORY" in err

    def test_missing_path_exits_2(self, tmp_path):
        code, _, _ = run_cli(["validate", tmp_path / "nowhere"])
        assert code == 2


class TestAnnotate:
    def test_joy_golden(self):
        code, out, _ = run_cli(["annotate", "--text", "joyful, happy, radiant"])
        assert code == 0
        assert out == golden("annotate_joy.xml")

    def test_no_matches_gives_empty_document(self):
        code, out, _ = run_cli(["annotate", "--text", "completely unremarkable"])
        assert code == 0
        assert out == '<?xml version="1.0" encoding="UTF-8"?>\n<earl/>\n'

    def test_custom_lexicon(self, tmp_path):
        lex = tmp_path / "tiny.lex"
        lex.write_text("calm: serene\n")
        code, out, _ = run_cli(["annotate", "--text", "serene", "--lexicon", lex])
        assert code == 0
        assert 'category="calm"' in out


class TestClassify:
    def test_voice_anger_golden(self):
        code, out, _ = run_cli(
            ["classify", "--voice", FIXTURES / "features" / "voice_anger.features"]
        )
        assert code == 0
        assert out == golden("classify_voice_anger.tsv")

    def test_movement_grief_golden(self):
        code, out, _ = run_cli(
            ["classify", "--movement", FIXTURES / "features" / "movement_grief.features"]
        )
        assert code == 0
        assert out == golden("classify_movement_grief.tsv")

    def test_voice_sadness_tops_ranking(self):
        code, out, _ = run_cli(
            ["classify", "--voice", FIXTURES / "features" / "voice_sadness.features"]
        )
        assert code == 0
        assert out.splitlines()[0].startswith("sadness\t1")

    def test_bad_feature_value_exits_2(self, tmp_path):
        bad = tmp_path / "bad.features"
        bad.write_text("mean_f0=sideways\n")
        code, _, err = run_cli(["classify", "--voice", bad])
        assert code == 2
        assert "BAD_FEATURE" in err

    def test_unknown_field_exits_2(self, tmp_path):
        bad = tmp_path / "bad.features"
        bad.write_text("loudness=up\n")
        code, _, _ = run_cli(["classify", "--voice", bad])
        assert code == 2


class TestFuse:
    def test_jack_stream_golden(self):
        code, out, _ = run_cli(
            ["fuse", "--evidence", FIXTURES / "streams" / "jack_angry.stream"]
        )
        assert code == 0
        assert out == golden("fuse_jack.xml")

    def test_calm_stream_yields_complex(self):
        code, out, _ = run_cli(
            ["fuse", "--evidence", FIXTURES / "streams" / "jack_calm.stream"]
        )
        assert code == 0
        assert "<complex-emotion>" in out
        assert out.index('category="sadness"') < out.index('category="grief"')

    def test_at_far_future_has_no_signal(self):
        code, _, err = run_cli(
            ["fuse", "--evidence", FIXTURES / "streams" / "jack_angry.stream", "--at", "60"]
        )
        assert code == 2
        assert "NO_SIGNAL" in err

    def test_config_overrides(self, tmp_path):
        cfg = tmp_path / "f.cfg"
        cfg.write_text("constituent_threshold = 0.95\n")
        code, _, err = run_cli(
            ["fuse", "--evidence", FIXTURES / "streams" / "jack_angry.stream", "--config", cfg]
        )
        assert code == 2
        assert "NO_SIGNAL" in err

    def test_bad_stream_exits_2(self, tmp_path):
        bad = tmp_path / "bad.stream"
        bad.write_text("0.0 telepathy anger 1.0 1.0\n")
        code, _, err = run_cli(["fuse", "--evidence", bad])
        assert code == 2
        assert "BAD_STREAM" in err


class TestDecide:
    def test_angry_stream_denied(self):
        code, out, _ = run_cli(
            [
                "decide",
                "--evidence", FIXTURES / "streams" / "jack_angry.stream",
                "--resource", "hazardous-tool",
                "--policy", FIXTURES / "policies" / "hazardous_tool.policy",
            ]
        )
        assert code == 3
        assert out == golden("decide_jack_angry.txt")

    def test_calm_stream_allowed(self):
        code, out, _ = run_cli(
            [
                "decide",
                "--evidence", FIXTURES / "streams" / "jack_calm.stream",
                "--resource", "hazardous-tool",
                "--policy", FIXTURES / "policies" / "hazardous_tool.policy",
            ]
        )
        assert code == 0
        assert out == golden("decide_jack_calm.txt")

    def test_unlisted_resource_allowed(self):
        code, _, _ = run_cli(
            [
                "decide",
                "--evidence", FIXTURES / "streams" / "jack_angry.stream",
                "--resource", "library",
                "--policy", FIXTURES / "policies" / "hazardous_tool.policy",
            ]
        )
        assert code == 0


class TestStats:
    def test_tsv_golden(self):
        code, out, _ = run_cli(["stats", FIXTURES / "earl"])
        assert code == 0
        assert out == golden("stats_earl.tsv")

    def test_json_golden(self):
        code, out, _ = run_cli(["stats", FIXTURES / "earl", "--json"])
        assert code == 0
        assert out == golden("stats_earl.json")

    def test_histogram_totals_match_annotation_count(self):
        _, out, _ = run_cli(["stats", FIXTURES / "earl"])
        rows = dict(line.split("\t") for line in out.splitlines())
        histogram_total = sum(
            int(v) for k, v in rows.items() if k.startswith("category.")
        )
        assert histogram_total == int(rows["annotations_count"])


class TestUsage:
    def test_no_arguments_exits_1(self):
        code, _, _ = run_cli([])
        assert code == 1

    def test_unknown_subcommand_exits_1(self):
        code, _, _ = run_cli(["frobnicate"])
        assert code == 1

    def test_missing_required_flag_exits_1(self):
        code, _, _ = run_cli(["annotate"])
        assert code == 1

    def test_console_entry_point(self):
        result = subprocess.run(
            [sys.executable, "-m", "earlkit.cli", "annotate", "--text", "happy"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert 'category="joy"' in result.stdout


class TestCliEdges:
    def test_validate_recurses_and_sorts(self, tmp_path):
        (tmp_path / "b").mkdir()
        (tmp_path / "a").mkdir()
        (tmp_path / "b" / "two.xml").write_bytes(b"<emotion/>")
        (tmp_path / "a" / "one.xml").write_bytes(b"<emotion/>")
        code, _, err = run_cli(["validate", tmp_path])
        assert code == 2  # MISSING_DESCRIPTOR in both
        lines = [line for line in err.splitlines() if "MISSING_DESCRIPTOR" in line]
        assert len(lines) == 2
        assert "one.xml" in lines[0] and "two.xml" in lines[1]

    def test_stats_missing_path_exits_2(self, tmp_path):
        code, _, _ = run_cli(["stats", tmp_path / "nowhere"])
        assert code == 2

    def test_stats_counts_broken_file_as_error(self, tmp_path):
        (tmp_path / "ok.xml").write_bytes(b'<emotion category="x"/>')
        (tmp_path / "broken.xml").write_bytes(b"<emotion")
        code, out, _ = run_cli(["stats", tmp_path])
        rows = dict(line.split("\t") for line in out.splitlines())
        assert code == 0
        assert rows["files_scanned"] == "2"
        assert rows["error_count"] == "1"
        assert rows["annotations_count"] == "1"

    def test_fuse_at_before_stream_end_exits_2(self):
        code, _, err = run_cli(
            ["fuse", "--evidence", FIXTURES / "streams" / "jack_angry.stream", "--at", "0.1"]
        )
        assert code == 2
        assert "TIME_REGRESSION" in err

    def test_decide_with_config(self, tmp_path):
        cfg = tmp_path / "f.cfg"
        cfg.write_text("weight.movement_kinematic = 0.0\ndecay_lambda = 0\n")
        code, out, _ = run_cli(
            [
                "decide",
                "--evidence", FIXTURES / "streams" / "jack_angry.stream",
                "--resource", "hazardous-tool",
                "--policy", FIXTURES / "policies" / "hazardous_tool.policy",
                "--config", cfg,
            ]
        )
        assert code == 3  # voice alone still clears the threshold
        assert "aggressive=1.0000" in out

    def test_missing_evidence_file_exits_2(self, tmp_path):
        code, _, err = run_cli(
            [
                "decide",
                "--evidence", tmp_path / "nope.stream",
                "--resource", "x",
                "--policy", FIXTURES / "policies" / "hazardous_tool.policy",
            ]
        )
        assert code == 2

    def test_bad_lexicon_exits_2(self, tmp_path):
        lex = tmp_path / "dup.lex"
        lex.write_text("joy: happy\nactivation: happy\n")
        code, _, err = run_cli(["annotate", "--text", "happy", "--lexicon", lex])
        assert code == 2
        assert "DUPLICATE_MARKER" in err

    def test_bad_policy_exits_2(self, tmp_path):
        pol = tmp_path / "bad.policy"
        pol.write_text("x denywhen y >= 0.5\n")
        code, _, err = run_cli(
            [
                "decide",
                "--evidence", FIXTURES / "streams" / "jack_angry.stream",
                "--resource", "x",
                "--policy", pol,
            ]
        )
        assert code == 2
        assert "BAD_RULE" in err
