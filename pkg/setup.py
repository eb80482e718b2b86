""" Setup file. """

from setuptools import find_packages, setup

with open("README.rst", "r") as readme_file:
    README = readme_file.read()

version = {}
with open("src/expansive/version.py", "r") as f:
    exec(f.read(), version)

setup(
    name="expansive",
    version=version["__version__"],
    description="A package for building and verifying expansive motions "
    "of the N-body problem.",
    long_description=README,
    author="The expansive developers",
    license="MIT",
    keywords=["celestial-mechanics n-body hyperbolic parabolic action"],
    packages=find_packages("src"),
    package_dir={"": "src"},
    python_requires=">=3.8",
    install_requires=["numpy", "scipy"],
    entry_points={"console_scripts": ["expansive=expansive.cli:main"]},
    tests_require=["pytest", "hypothesis", "numpy", "scipy"],
)
