#!/usr/bin/env python
from setuptools import setup

files = [
    "cknet",
    "cknet.module_utils",
    "cknet.modules",
    "cknet.plugins",
    "cknet.plugins.doc_fragments",
]

long_description = open('README.rst', 'r').read()

setup(
    name='cknet-modules',
    version='0.1.0',
    description='Discrete constant negative curvature nets from a quaternionic Lax pair',
    long_description=long_description,
    long_description_content_type='text/x-rst',
    packages=files,
    python_requires='>=3.6',
    install_requires=[
        'ansible>=5.0.0',
        'numpy>=1.17',
        'scipy>=1.3',
    ],
    entry_points={
        'console_scripts': [
            'cknet=cknet.cli:main',
        ],
    },
)
