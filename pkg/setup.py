from setuptools import setup, find_packages

setup(
    name="alumina-rh-twin",
    version="0.1.0",
    packages=find_packages(include=["src", "src.*"]),
    install_requires=[
        'numpy>=1.22.0',
        'scipy>=1.10.0',
        'pandas>=2.0.0',
        'pydantic>=2.5.0',
        'PyYAML>=6.0',
        'typer>=0.9.0,<=0.15.2',
        'click>=8.1.0,<8.2',
        'tomlkit>=0.12.0',
    ],
    extras_require={
        'test': [
            'pytest>=7.3.1',
        ],
    },
    entry_points={
        'console_scripts': [
            'rh-twin=src.cli.main:app',
        ],
    },
    python_requires=">=3.9",
    description="Digital twin and calibration toolkit for capacitive porous-alumina humidity sensors",
    long_description=open('README.md').read(),
    long_description_content_type="text/markdown",
)
