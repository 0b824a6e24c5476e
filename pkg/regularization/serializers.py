from collections import OrderedDict

from rest_framework import serializers
from rest_framework.renderers import JSONRenderer


class LambdaFieldMixin:
    """Expose the ``lam`` field under its public name ``lambda``.

    ``lambda`` is a Python keyword and cannot be declared as a class
    attribute; the column keeps its declared position.
    """

    def get_fields(self):
        fields = super().get_fields()
        return OrderedDict(
            ("lambda" if name == "lam" else name, field)
            for name, field in fields.items()
        )


def _number(**kwargs):
    return serializers.FloatField(
        allow_null=True, required=False, default=None, **kwargs
    )


class SweepRowSerializer(LambdaFieldMixin, serializers.Serializer):
    """One coupling value of a sweep; failed rows only carry g and error."""

    g = serializers.FloatField()
    lam = _number()
    e0 = _number()
    k0 = _number()
    k0_asym = _number()
    a_re = _number()
    a_im = _number()
    b_re = _number()
    b_im = _number()
    e2_re = _number()
    e2_im = _number()
    e2_analytic = _number()
    e2_singular = _number()
    ratio = _number()
    w_half = _number()
    mass0 = _number()
    mass2 = _number()
    error = serializers.CharField(
        allow_null=True, allow_blank=True, required=False, default=None
    )


class ZerothReportSerializer(LambdaFieldMixin, serializers.Serializer):
    g = serializers.FloatField(min_value=0.0)
    lam = serializers.FloatField()
    lambda_source = serializers.ChoiceField(choices=["optimized", "given"])
    e0_weak = serializers.FloatField()
    e0_full = serializers.FloatField()
    mass0 = serializers.FloatField()


class KernelRowSerializer(serializers.Serializer):
    """Kernel values at one momentum in ``m*exp(s)`` notation."""

    k = serializers.FloatField(min_value=0.0)
    k_i1 = serializers.CharField()
    i2 = serializers.CharField()
    i3 = serializers.CharField()
    i = serializers.CharField()
    i_derivative = serializers.CharField(allow_null=True)
    j = _number()
    i_asymptotic = serializers.CharField(allow_null=True)
    asymptotic_ratio = _number()


class MassReportSerializer(LambdaFieldMixin, serializers.Serializer):
    g = serializers.FloatField(min_value=0.0)
    lam = serializers.FloatField()
    mass0 = serializers.FloatField()
    mass0_coefficient = serializers.FloatField()
    pt_mass = serializers.FloatField()
    k0 = _number()
    mass2_coefficient = serializers.FloatField()
    mass2 = serializers.FloatField()
    mass2_first_order = serializers.FloatField()


class PerturbationReportSerializer(serializers.Serializer):
    g = serializers.FloatField(min_value=0.0)
    p = serializers.FloatField(min_value=0.0)
    cutoff = serializers.FloatField(min_value=0.0)
    self_energy = serializers.FloatField()
    pt_mass = serializers.FloatField()


class CheckOutcomeSerializer(serializers.Serializer):
    name = serializers.CharField()
    passed = serializers.BooleanField()
    measured = serializers.FloatField()
    expected = serializers.FloatField()
    tolerance = serializers.FloatField()
    detail = serializers.CharField(allow_blank=True)


def render_json(data) -> str:
    """Indented strict JSON of serialized data, newline terminated."""
    return JSONRenderer().render(data, renderer_context={"indent": 2}).decode() + "\n"
