"""setuptool based setup script

Adapted from https://github.com/pypa/sampleproject
"""

# Always prefer setuptools over distutils
import pathlib
from setuptools import setup, find_packages

here = pathlib.Path(__file__).parent.resolve()

# Get the long description from the README file
long_description = (here / "README.md").read_text(encoding="utf-8")

setup(
    name="perisol",
    version="0.1.0",
    description="Certify, compute and simulate positive periodic solutions of impulsive "
    + "periodic delay differential systems",
    long_description=long_description,  # Optional
    long_description_content_type="text/markdown",
    classifiers=[  # Optional
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3 :: Only",
    ],
    keywords="delay differential equations, impulses, periodic solutions, nicholson, hematopoiesis",
    package_dir={"": "src"},  # Optional
    packages=find_packages(where="src"),  # Required
    python_requires=">=3.9, <4",
    install_requires=[
        "scipy>=1.12",
        "numpy>=1.22.1",
        "pandas>=1.3.5",
        "PyYAML>=5.4.1",
        "click>=8.0",
        "cerberus>=1.3.4",
        "marshmallow>=3.14",
        "marshmallow-enum>=1.5",
    ],
    extras_require={  # Optional
        # Note : only pylint or black are fixed because updates in these packages
        # can often cause CI to fail.
        "dev": ["black>=21.9b0", "tox", "pylint==2.12.2", "pytest", "pytest-cov"],
    },
    entry_points={
        "console_scripts": [
            "perisol=perisol.cli:cli",
        ],
    },
)
