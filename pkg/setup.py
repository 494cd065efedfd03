from setuptools import setup, find_packages
with open("readme.md", "r", encoding = "utf-8") as fh:
    long_description = fh.read()
setup(
    name="spgd",
    version="0.1.0",
    description="Sparse separated-representation regression: s-PGD, rs-PGD, s2-PGD and ANOVA-PGD fits of scarce high-dimensional data, with the benchmark cases that check them.",
    long_description_content_type="text/markdown",
    long_description = long_description,
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "scikit-learn>=1.2",
        "anyio",
        "sniffio",
        "aiofiles",
    ],
    extras_require={
        "test": ["pytest"],
        "docs": ["mkdocs", "mkdocs-material", "pymdown-extensions"],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.10",
    entry_points={
        'console_scripts': [
            'spgd=spgd.cli.main:main',
        ],
    },
)
