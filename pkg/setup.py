import ast
from pathlib import Path

from setuptools import find_packages, setup

PACKAGE_DIR = 'svlab'
HERE = Path(__file__).parent


def get_version_from_file(fl: Path) -> str:
    for node in ast.parse(fl.read_text()).body:
        if isinstance(node, ast.Assign) and any(getattr(t, 'id', None) == '__version__' for t in node.targets):
            return ast.literal_eval(node.value)
    raise RuntimeError(f'No version found in {fl}')


def get_requirements_from_file(req_file: Path):
    reqs = []
    for line in req_file.read_text().splitlines():
        line = line.split('#', 1)[0].strip()
        if line.startswith('-r '):
            reqs.extend(get_requirements_from_file(req_file.parent / line[len('-r '):].strip()))
        elif line and not line.startswith('-'):
            reqs.append(line)
    return reqs


setup(
    name='svlab',
    version=get_version_from_file(HERE / PACKAGE_DIR / '__version__.py'),
    classifiers=[
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Development Status :: 3 - Alpha'],
    packages=find_packages(include=[f'{PACKAGE_DIR}*']),
    package_data={PACKAGE_DIR: ['grammar.lark', 'data/*.json']},
    install_requires=get_requirements_from_file(HERE / 'requirements.txt'),
    python_requires='>=3.8',
    entry_points={'console_scripts': ['svlab = svlab.cli:cli']},
    description='Exact lab for simplicial volume and Euler characteristic',
    long_description=(HERE / 'README.rst').read_text(encoding='utf-8'),
    long_description_content_type='text/x-rst',
    zip_safe=False
)
