"""Configuration for mutmut mutation testing

Run mutation tests with: mutmut run
View mutations with: mutmut show
"""

# Path to the package to mutate
paths_to_mutate = [
    "meanaudit/",
]

# Command to run tests; slow scans and benchmarks are skipped per mutant
test_command = (
    "env PYTEST_DISABLE_PLUGIN_AUTOLOAD=1 python -m pytest tests -x -m 'not slow' --benchmark-skip"
)

# Timeout for test runs (in seconds)
test_timeout = 600

# Exclude certain files or patterns from mutation
exclude = [
    "*/tests/*",
    "*/test_*.py",
    # Re-exports only
    "*/__init__.py",
    "*/__main__.py",
    "*/_version.py",
    "*/conftest.py",
]
