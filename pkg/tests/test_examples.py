import pytest

from morava.examples import NAMES, ExampleError, ExampleRecord, check_example, example


@pytest.mark.parametrize("name", NAMES)
def test_example_passes(name):
    assert check_example(name) == []


@pytest.mark.parametrize("name", ["v_n(3)", "chi_tilde(3)"])
def test_parametrized_heights(name):
    assert check_example(name) == []


def test_records_have_provenance_and_expectations():
    for name in NAMES:
        rec = example(name)
        assert rec.provenance and rec.expected


def test_empty_provenance_rejected():
    with pytest.raises(ExampleError):
        ExampleRecord("x", "", {}, {}, lambda w: {})


def test_unknown_name():
    with pytest.raises(ExampleError, match="unknown example"):
        example("so9")


def test_diff_reports_mismatch():
    rec = example("so7")
    broken = ExampleRecord(rec.name, rec.provenance, rec.inputs,
                           {**rec.expected, "K(1)": rec.expected["K(2)"]}, rec.compute)
    diffs = broken.diff()
    assert len(diffs) == 1 and diffs[0].startswith("so7/K(1)")

