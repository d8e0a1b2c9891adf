import importlib

def test_import_sinhgordon_tau_cli():
    m = importlib.import_module("sinhgordon_tau.cli")
    assert callable(m.main) and callable(m.build_parser)
