import importlib

MODULES = [
    "sinhgordon_tau",
    "sinhgordon_tau.__main__",
    "sinhgordon_tau.errors",
    "sinhgordon_tau.config",
    "sinhgordon_tau.sg_types",
    "sinhgordon_tau.validate",
    # numerics
    "sinhgordon_tau.specfun",
    "sinhgordon_tau.quad",
    "sinhgordon_tau.sinhg",
    "sinhgordon_tau.connect",
    "sinhgordon_tau.tau",
    "sinhgordon_tau.tau.action",
    "sinhgordon_tau.tau.identity",
    "sinhgordon_tau.tau.fit",
    # drivers
    "sinhgordon_tau.verify",
    "sinhgordon_tau.sweep",
    "sinhgordon_tau.cli",
]


def test_import_surface():
    for name in MODULES:
        assert importlib.import_module(name) is not None
