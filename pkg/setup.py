#!/usr/bin/env python
"""
Setup script for sclic

The version is taken from the most recent git tag when building from a
checkout and recorded in sclic/_version.py so that source distributions
and installed copies report the same version.
"""
import io
import os
import re
import subprocess

from setuptools import find_packages, setup

MODULE = 'sclic'
ROOTDIR = os.path.abspath(os.path.dirname(__file__))
VERSION_FILE = os.path.join(ROOTDIR, MODULE, "_version.py")

def _read(filename):
    with io.open(os.path.join(ROOTDIR, filename), encoding='utf-8') as f:
        return f.read()

def _git(*args):
    """
    :return: Output of a git command, or None outside a git checkout
    """
    try:
        out = subprocess.run(["git"] + list(args), cwd=ROOTDIR, capture_output=True, check=True)
        return out.stdout.decode("utf-8").strip()
    except (OSError, subprocess.CalledProcessError):
        return None

def _git_metadata():
    """
    :return: Tuple of (version, timestamp) from git tags, or (None, None)

    Tags of the form v1.2.3 followed by N commits give version 1.2.3.postN
    """
    describe = _git("describe", "--tags", "--dirty")
    if describe is None:
        return None, None
    match = re.match(r"v?(\d+\.\d+\.\d+)(?:-(\d+))?", describe)
    if not match:
        raise RuntimeError(f"Failed to parse version from git tag {describe}")
    version = match.group(1)
    if match.group(2):
        version += ".post" + match.group(2)
    return version, _git("log", "-1", "--format=%cd")

def get_version():
    version, timestamp = _git_metadata()
    if version is None:
        # Not a checkout: keep whatever an earlier build recorded
        md = _read(os.path.join(MODULE, "_version.py")) if os.path.exists(VERSION_FILE) else ""
        match = re.search(r"^__version__ = ['\"]([^'\"]*)['\"]", md, re.M)
        return match.group(1) if match else "unknown"

    with io.open(VERSION_FILE, "w", encoding='utf-8') as f:
        f.write(f"__version__ = '{version}'\n")
        f.write(f"__timestamp__ = '{timestamp}'\n")
    return version

def get_requirements():
    return [l.strip() for l in _read('requirements.txt').splitlines() if l.strip()]

kwargs = {
    'name' : MODULE,
    # setuptools needs a PEP 440 version; "unknown" maps to a local label
    'version' : (lambda v: "0+unknown" if v == "unknown" else v)(get_version()),
    'description' : 'Stable CLosedness of Images of Convex sets',
    'long_description' : _read('README.md'),
    'long_description_content_type' : 'text/markdown',
    'python_requires' : '>=3.7',
    'install_requires' : get_requirements(),
    'extras_require' : {
        'test' : ['pytest'],
    },
    'packages' : find_packages(),
    'entry_points' : {
        'console_scripts' : [
            "sclic=sclic.main:main",
        ],
    },
    'test_suite' : 'sclic/test',
    'classifiers' : [
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
}

setup(**kwargs)
