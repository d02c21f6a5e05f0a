from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="robinfrac",
    version="0.1.0",
    description="Spectral collocation and FHBVM time stepping for time-fractional reaction-diffusion with Robin conditions",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(include=["src", "src.*"]),
    py_modules=["robinfrac"],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "License :: OSI Approved :: MIT License",
    ],
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "mpmath>=1.2",
        "pyyaml>=6.0",
        "markdown>=3.4",
        "python-frontmatter>=1.0.0",
    ],
    entry_points={
        "console_scripts": [
            "robinfrac=src.cli:main",
        ],
    },
)
