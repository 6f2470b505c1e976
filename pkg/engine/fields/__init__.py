"""
Field samplers for the spherical ensembles and the planar limit fields.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from engine.fields.export import read_sample, sidecar, write_sample
from engine.fields.harmonics import (
    associated_legendre,
    coefficient_count,
    normalized_legendre,
    real_harmonics,
    synthesize_points,
    synthesize_rows,
)
from engine.fields.models import (
    FieldSample,
    FieldSpec,
    PlanarSpec,
    spec_document,
    spec_from_document,
    spec_label,
    spec_scale,
)
from engine.fields.planar import WaveSuperposition, sample_planar
from engine.fields.rng import Stream, replicate_rng, stream_key
from engine.fields.sampling import sample_field
from engine.fields.spherical import (
    draw_coefficients,
    isotropic_values,
    kostlan_basis_chunks,
    kostlan_field,
    kostlan_multi_indices,
    kostlan_size,
    kostlan_weights,
    sample_bandlimited,
    sample_isotropic,
    sample_kostlan,
    sample_rsh,
    sample_spherical,
)

__all__ = [
    "FieldSample",
    "FieldSpec",
    "PlanarSpec",
    "Stream",
    "WaveSuperposition",
    "associated_legendre",
    "coefficient_count",
    "draw_coefficients",
    "isotropic_values",
    "kostlan_basis_chunks",
    "kostlan_field",
    "kostlan_multi_indices",
    "kostlan_size",
    "kostlan_weights",
    "normalized_legendre",
    "read_sample",
    "real_harmonics",
    "replicate_rng",
    "sample_bandlimited",
    "sample_field",
    "sample_isotropic",
    "sample_kostlan",
    "sample_planar",
    "sample_rsh",
    "sample_spherical",
    "sidecar",
    "spec_document",
    "spec_from_document",
    "spec_label",
    "spec_scale",
    "stream_key",
    "synthesize_points",
    "synthesize_rows",
    "write_sample",
]
