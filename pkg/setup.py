# (Tuỳ chọn) Dùng khi đóng gói project
from setuptools import find_packages, setup

setup(
    name="sh-pulse-stability",
    version="0.1.0",
    description="Dem gia tri rieng bat on dinh cua pulse Swift-Hohenberg bang diem lien hop",
    package_dir={"": "src"},
    packages=find_packages("src"),
    python_requires=">=3.9",
    install_requires=["numpy>=1.24.0", "scipy>=1.10.0", "pandas>=2.0.0"],
    extras_require={"test": ["pytest>=7.0.0"]},
)
