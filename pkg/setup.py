from pathlib import Path

import toml
from setuptools import setup, find_packages

here = Path(__file__).parent
info = toml.load(here.joinpath('package_info.toml'))
package_name = info['package-info']['package-name']

with open(here.joinpath('src', package_name, 'resources', 'VERSION'), 'r') as fvers:
    version = fvers.read().strip()

with open(here.joinpath('README.rst'), 'r', encoding='utf-8') as fread:
    long_description = fread.read()

setup(
    name=package_name,
    version=version,
    description=info['package-info']['description'],
    long_description=long_description,
    long_description_content_type='text/x-rst',
    author=info['package-info']['author'],
    author_email=info['package-info']['author-email'],
    url=info['package-info']['package-url'],
    license=info['package-info']['license'],
    packages=find_packages(where='src'),
    package_dir={'': 'src'},
    package_data={package_name: ['resources/*']},
    include_package_data=True,
    python_requires='>=3.9',
    install_requires=info['package-install']['packages-required'],
    extras_require={'test': info['package-install']['packages-test']},
    entry_points={key: value for key, value in info['entry-points'].items()},
    classifiers=[
        'Programming Language :: Python :: 3',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Topic :: Scientific/Engineering',
    ],
)
