from setuptools import setup, find_packages

setup(
    name="youngkit",
    author="Fred Moolekamp",
    author_email="fred.moolekamp@gmail.com",
    description="Young's inequality for nondecreasing functions and kernel-weighted measures",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    keywords=["young inequality", "legendre duality", "quadrature", "c-convexity", "pseudo-inverse"],
    packages=find_packages(exclude=["tests"]),
    package_data={"youngkit": ["schema/*.json"]},
    python_requires='>=3.8',
    install_requires=["numpy", "scipy", "mpmath"],
    extras_require={"test": ["pytest", "hypothesis", "jsonschema"]},
    entry_points={"console_scripts": ["youngkit = youngkit.scripts.cli:main"]},
    setup_requires=['setuptools_scm', 'setuptools_scm_git_archive'],
    use_scm_version={'write_to': 'youngkit/_version.py'},
)
