from setuptools import setup, find_packages
with open('README.md', 'r', encoding='utf-8') as fh:
    long_description = fh.read()
setup(name='windpf', version='0.3.0', description='Wind-aware fixed-wing path following guidance with a closed-loop scenario simulator', long_description=long_description, long_description_content_type='text/markdown', author='windpf Team', packages=find_packages(exclude=['tests', 'tests.*']), package_data={'windpf': ['scenarios/*.yaml', 'grids/*.yaml']}, install_requires=['numpy>=1.22', 'pydantic>=2.0', 'PyYAML>=6.0', 'msgpack>=1.0.5', 'zstandard>=0.21.0', 'portalocker>=2.7.0', 'rich>=13.0.0', 'typer>=0.9.0'], extras_require={'cli': ['typer>=0.9.0', 'rich>=13.0.0'], 'test': ['pytest>=7.0']}, entry_points={'console_scripts': ['windpf=windpf.cli:app']}, classifiers=['Development Status :: 4 - Beta', 'Intended Audience :: Science/Research', 'License :: OSI Approved :: Apache Software License', 'Programming Language :: Python :: 3', 'Topic :: Scientific/Engineering'], python_requires='>=3.9')
