"""Module definition for dwellcert."""

import os

from setuptools import find_packages, setup

# used helpers from pip's setup.py:
# https://github.com/pypa/pip/blob/main/setup.py


def read_file(rel_path: str) -> str:
    """Read the full contents of the given path, relative to this file."""
    here = os.path.abspath(os.path.dirname(__file__))
    with open(os.path.join(here, rel_path)) as fp:
        return fp.read()


def get_version(rel_path: str) -> str:
    """Return the __version__ value from the given file."""
    for line in read_file(rel_path).splitlines():
        if line.startswith("__version__"):
            delim = '"' if '"' in line else "'"
            return line.split(delim)[1]
    raise RuntimeError("Unable to find version string.")


def get_requirements(rel_path: str) -> list:
    """Return the pinned requirements from the given file as install ranges."""
    return [
        line.strip().replace("==", ">=")
        for line in read_file(rel_path).splitlines()
        if line.strip() and not line.startswith(("#", "-r"))
    ]


setup(
    name="dwellcert",
    version=get_version("dwellcert/version.py"),
    description="Dwell-time stability certificates for switched linear systems.",
    long_description=read_file("README.md"),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests"]),
    install_requires=get_requirements("requirements/core.txt") + ["pydantic<2"],
    python_requires=">=3.8",
    entry_points={"console_scripts": ["dwellcert = dwellcert.cli:main"]},
    classifiers=[
        "Programming Language :: Python :: 3.8",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
