import io

import pytest

from app import settings
from app.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, exit_code_for, parse_config, run
from app.models import CheckReport, CliConfig, Witness


def invoke(*args: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(list(args), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_gen_pascal_csv():
    """Test generating P_5 as CSV."""
    code, out, err = invoke("gen", "--family", "pascal", "--n", "5", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines() == ["1,0,0,0,0", "1,1,0,0,0", "1,2,1,0,0", "1,3,3,1,0", "1,4,6,4,1"]
    assert err == ""


def test_gen_text_with_order():
    """Test generating H_{6,2} in the text format."""
    code, out, _ = invoke("gen", "--family", "H", "--n", "6", "--r", "2")
    assert code == EXIT_OK
    assert out.splitlines() == ["n=4", "row 1: 1 0 0 0", "row 2: -2 1 0 0", "row 3: 2 -4 1 0", "row 4: 0 6 -6 1"]


def test_gen_generalized_from_named_sequence():
    """Test a generalized Pascal matrix from a named sequence."""
    code, out, _ = invoke("gen", "--family", "generalized", "--n", "3", "--seq", "sets", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines() == ["0,0,0", "1,0,0", "1,2,0"]


def test_snf_of_family():
    """Test the Smith diagonal of a generated family."""
    code, out, _ = invoke("snf", "--family", "pascal-minus-i-power", "--n", "6", "--r", "2")
    assert code == EXIT_OK
    assert out.strip() == "diag: 2 2 12 60 0 0"


def test_snf_certify():
    """Test printing and verifying U and V."""
    code, out, _ = invoke("snf", "--family", "G", "--n", "6", "--r", "2", "--certify")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "diag: 2 2 12 60"
    assert "U:" in lines
    assert "V:" in lines
    assert lines[-1] == "verified: true"


def test_snf_from_files(tmp_path):
    """Test reading CSV and text matrices from files."""
    csv_file = tmp_path / "a.csv"
    csv_file.write_text("2,0,0\n0,6,0\n0,0,12\n")
    code, out, _ = invoke("snf", "--input", str(csv_file), "--format", "csv")
    assert code == EXIT_OK
    assert out.strip() == "diag: 2 6 12"

    text_file = tmp_path / "a.txt"
    text_file.write_text("n=2\nrow 1: 4 0\nrow 2: 0 6\n")
    code, out, _ = invoke("snf", "--input", str(text_file))
    assert code == EXIT_OK
    assert out.strip() == "diag: 2 12"


def test_snf_missing_file(tmp_path):
    """Test that a missing input file exits 2."""
    code, out, err = invoke("snf", "--input", str(tmp_path / "missing.csv"))
    assert code == EXIT_USAGE
    assert out == ""
    assert err.startswith("error:")


def test_snf_malformed_file(tmp_path):
    """Test that a ragged CSV file exits 2."""
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3\n")
    code, _, err = invoke("snf", "--input", str(bad), "--format", "csv")
    assert code == EXIT_USAGE
    assert "expected 2 entries" in err


def test_jordan():
    """Test computed and predicted blocks of P_5 mod 2."""
    code, out, _ = invoke("jordan", "--n", "5", "--mod", "2")
    assert code == EXIT_OK
    assert out.splitlines() == ["blocks: 2 2 1 (eigenvalue 1)", "predicted: 2 2 1", "minimal polynomial: (x-1)^2"]


def test_jordan_rejects_composite_modulus():
    """Test that a composite modulus exits 2."""
    code, out, err = invoke("jordan", "--n", "5", "--mod", "4")
    assert code == EXIT_USAGE
    assert out == ""
    assert "not prime" in err


def test_verify_identity_all():
    """Test every identity up to n = 5."""
    code, out, _ = invoke("verify", "--identity", "all", "--n-max", "5")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 5 + 5 + 10 + 10
    assert lines[0] == "check=identity1 n=1 passed=true"
    assert all("passed=true" in line for line in lines)


def test_verify_single_identity_and_order():
    """Test one identity at a fixed size and order."""
    code, out, _ = invoke("verify", "--identity", "4", "--n", "6", "--r", "2")
    assert code == EXIT_OK
    assert out.splitlines() == ["check=identity4 n=6 r=2 passed=true"]


def test_verify_check_with_modulus():
    """Test theorem 1 with a fixed prime."""
    code, out, _ = invoke("verify", "--check", "theorem1", "--n-max", "7", "--mod", "3")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 7
    assert "check=theorem1 n=7 p=3 passed=true" in out.splitlines()


def test_verify_convolution_trials():
    """Test the number of random convolution reports."""
    code, out, _ = invoke("verify", "--check", "convolution", "--n-max", "6", "--trials", "12", "--seed", "3")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 12


def test_oracle():
    """Test both closed sides against the brute-force count."""
    code, out, _ = invoke("oracle", "--n", "4", "--m", "1", "--r", "2")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "left=60 right=60 enumerated=60"
    assert lines[1] == "check=combinatorial n=4 r=2 m=1 passed=true"


def test_oracle_beyond_enumeration_cap():
    """Test that the oracle refuses sizes above the cap."""
    code, _, err = invoke("oracle", "--n", "40", "--m", "1", "--r", "2")
    assert code == EXIT_USAGE
    assert "enumeration" in err


def test_explore_always_succeeds():
    """Test that exploration exits 0 and prints a summary."""
    code, out, _ = invoke("explore", "--kind", "stirling-cycle", "--r", "2", "--n-max", "6")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 5
    assert lines[-1].startswith("summary: ")
    assert lines[-1].endswith("/4 agree")


@pytest.mark.parametrize(
    "args",
    [
        [],
        ["frobnicate"],
        ["gen", "--n", "5"],
        ["gen", "--family", "catalan", "--n", "5"],
        ["jordan", "--n", "five", "--mod", "2"],
        ["verify", "--identity", "1"],
        ["verify", "--identity", "1", "--check", "theorem2", "--n", "3"],
    ],
)
def test_usage_errors(args):
    """Test that malformed command lines exit 2 with usage text."""
    code, out, err = invoke(*args)
    assert code == EXIT_USAGE
    assert out == ""
    assert "usage:" in err


def test_parameter_errors_exit_two():
    """Test that out-of-range parameters exit 2."""
    code, _, err = invoke("gen", "--family", "F", "--n", "6")
    assert code == EXIT_USAGE
    assert "needs r" in err
    code, _, _ = invoke("gen", "--family", "pascal", "--n", "0")
    assert code == EXIT_USAGE


def test_exit_code_for_reports():
    """Test that any failed report gives exit code 1."""
    passed = CheckReport(check_id="identity1", n=3, passed=True)
    failed = CheckReport(check_id="identity1", n=4, passed=False, witness=Witness(row=2, col=1, lhs=1, rhs=2))
    assert exit_code_for([passed, passed]) == EXIT_OK
    assert exit_code_for([passed, failed]) == EXIT_FAILED == 1
    assert exit_code_for([]) == EXIT_OK


def test_verify_fixed_order():
    """Test theorem 3 at a fixed size and order."""
    code, out, _ = invoke("verify", "--check", "theorem3", "--n", "4", "--r", "2")
    assert code == EXIT_OK
    assert out.strip() == "check=theorem3 n=4 r=2 passed=true"


def test_parse_config():
    """Test that parsed flags land in the config."""
    config = parse_config(["verify", "--check", "theorem1", "--n", "5", "--mod", "7"])
    assert config.command == "verify"
    assert config.check == "theorem1"
    assert config.p == 7
    assert config.n == 5
    assert config.n_max is None


def test_convolution_with_size_zero_is_a_parameter_error():
    """Test that convolution trials need at least size 1."""
    code, out, err = invoke("verify", "--check", "convolution", "--n", "0")
    assert code == EXIT_USAGE
    assert out == ""
    assert err.startswith("error:")


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "--identity", "3", "--n", "5", "--r", "9"],
        ["verify", "--identity", "all", "--n-max", "4", "--r", "4"],
        ["verify", "--check", "theorem3", "--n", "5", "--r", "9"],
        ["verify", "--check", "equivalence", "--n", "5", "--r", "0"],
        ["verify", "--check", "closed-form", "--n", "3", "--r", "4"],
    ],
)
def test_order_outside_every_size_is_a_parameter_error(args):
    """Test that an order no requested size admits exits 2 instead of reporting nothing."""
    code, out, err = invoke(*args)
    assert code == EXIT_USAGE
    assert out == ""
    assert "out of range" in err or "needs 1 <= r < n" in err


def test_snf_rejects_undecodable_file(tmp_path):
    """Test that a file that is not UTF-8 text is a format error."""
    binary = tmp_path / "a.csv"
    binary.write_bytes(b"\xff\xfe1,2\n3,4\n")
    code, out, err = invoke("snf", "--input", str(binary), "--format", "csv")
    assert code == EXIT_USAGE
    assert out == ""
    assert "not UTF-8" in err


def test_combinatorial_sweep_beyond_cap_is_a_parameter_error():
    """Test that the enumeration cap is checked before any report is computed."""
    code, out, err = invoke("verify", "--check", "combinatorial", "--n-max", str(settings.ENUMERATION_CAP + 3))
    assert code == EXIT_USAGE
    assert out == ""
    assert "enumeration is capped" in err


def test_config_defaults_follow_settings():
    """Test that trial count and seed default to the configured values."""
    config = CliConfig(command="verify")
    assert config.trials == settings.CONVOLUTION_TRIALS
    assert config.seed == settings.RANDOM_SEED


@pytest.mark.parametrize(
    "args",
    [
        ["gen", "--family", "stirling-cycle", "--n", "7"],
        ["snf", "--family", "G", "--n", "7", "--r", "3", "--certify"],
        ["jordan", "--n", "12", "--mod", "3"],
        ["verify", "--check", "convolution", "--n-max", "6", "--trials", "15"],
        ["explore", "--kind", "stirling-cycle", "--r", "2", "--n-max", "6"],
    ],
)
def test_repeated_invocations_are_byte_identical(args):
    """Test that running the same command twice gives the same output."""
    assert invoke(*args) == invoke(*args)
