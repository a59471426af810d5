"""
setuptools based setup module of dq_workbench.
"""

from setuptools import find_packages, setup

setup(
    name="dq_workbench",
    # keep in sync with dq_workbench/__init__.py
    version="0.1.0",
    description="Exact deformation quantization workbench: positive functionals, GNS and classical limits",
    license="MIT License",
    keywords="deformation quantization star product GNS positive functional formal power series",
    packages=find_packages(exclude=["tests"]),
    python_requires=">=3.11",
    zip_safe=False,
    # exact arithmetic runs on fractions; numpy holds the object matrices,
    # sympy parses literals and solves the obstruction equations,
    # glob_utils handles logging, json files and the default directories
    install_requires=[
        "numpy>=1.21",
        "sympy>=1.9",
        "glob_utils @ git+https://github.com/DavidMetzIMT/glob_utils.git",
    ],
    extras_require={"test": ["pytest>=7", "hypothesis>=6"]},
    # golden scenarios ship with the package
    package_data={"dq_workbench": ["scenarios/golden/*.toml", "scenarios/golden/*.json"]},
    entry_points={"console_scripts": ["dq_workbench=dq_workbench.main:main"]},
)
