from setuptools import setup, find_packages

setup(
    name="spt-engine",
    version="1.0.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    package_data={"app": ["corpus/*.spt", "corpus/*.expect"]},
    python_requires=">=3.9",
    install_requires=[
        "fastapi>=0.95.2",
        "uvicorn>=0.22.0",
        "python-dotenv>=1.0.0",
        "pydantic>=2.0.0",
        "pydantic-settings>=2.0.0",
        "pyparsing>=3.1.0",
        "tqdm>=4.65.0",
    ],
    entry_points={
        "console_scripts": [
            "spt=app.cli:main",
        ],
    },
)
