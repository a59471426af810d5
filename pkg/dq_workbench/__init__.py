"""dq_workbench: exact deformation-quantization workbench on polynomial algebras."""

__version__ = "0.1.0"
