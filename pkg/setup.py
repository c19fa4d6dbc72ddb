#!/usr/bin/env python3
"""
Setup for the package
"""

from setuptools import setup, find_packages

from spart import __version__

with open("requirements.txt") as f:
    requirements = f.read().splitlines()

setup(
    name="spart",
    version=__version__,
    packages=find_packages(exclude=("tests",)),
    package_data={"spart": ["presets/*.json"]},
    entry_points={"console_scripts": ["spart = spart.cli:spart"]},
    description="Colored spatial partitions, their categories and quantum group presentations.",
    install_requires=requirements,
    python_requires=">=3.7",
)
