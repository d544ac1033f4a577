import math

from django.core.exceptions import ValidationError as DjangoValidationError
from rest_framework import serializers

from .envelope import ConvCase
from .exceptions import InfConvError
from .extreal import Grid
from .funcspec import GaugeOf, Indicator, MaxAffine, NormP, ScaledSquaredNorm, Shift, Sum
from .gauge import GaugeSet
from .harness import VERDICTS, CheckCase, Corpus, MalformedCase
from .models import CheckResult
from .sets import Ball, FinitePoints, IntervalBox, PolygonV
from .utils import get_tolerances
from .vecsets import from_dict


def _build(factory, *args, **kwargs):
    """Run a domain constructor, reporting its validation errors the DRF way."""
    try:
        return factory(*args, **kwargs)
    except DjangoValidationError as e:
        raise serializers.ValidationError(e.messages)
    except InfConvError as e:
        raise serializers.ValidationError(str(e))


class StrictSerializer(serializers.Serializer):
    """Serializer that rejects keys it does not declare."""

    def to_internal_value(self, data):
        if not isinstance(data, dict):
            raise serializers.ValidationError({'non_field_errors': ['Expected a JSON object']})
        unknown = sorted(set(data) - set(self.fields))
        if unknown:
            raise serializers.ValidationError({key: ['Unknown key'] for key in unknown})
        return super().to_internal_value(data)


class ExtFloatField(serializers.Field):
    """A number, or the strings 'inf' / '-inf'."""

    def to_internal_value(self, data):
        if data in ('inf', '+inf'):
            return math.inf
        if data == '-inf':
            return -math.inf
        if isinstance(data, bool) or not isinstance(data, (int, float)):
            raise serializers.ValidationError(f"Expected a number or 'inf', got {data!r}")
        if math.isnan(data):
            raise serializers.ValidationError("NaN is not allowed")
        return float(data)

    def to_representation(self, value):
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value


def _vector(min_length=1, max_length=2, **kwargs):
    return serializers.ListField(child=serializers.FloatField(), min_length=min_length, max_length=max_length,
                                 **kwargs)


class _Dispatch(serializers.Field):
    """Field that picks a strict serializer by the payload's ``kind``."""
    label_text = 'object'

    def serializer_for(self, kind):
        return self.registry().get(kind)

    def to_internal_value(self, data):
        kind = data.get('kind') if isinstance(data, dict) else None
        serializer_class = self.serializer_for(kind)
        if serializer_class is None:
            raise serializers.ValidationError(f"Unknown {self.label_text} kind {kind!r}")
        serializer = serializer_class(data=data, context=self.context)
        serializer.is_valid(raise_exception=True)
        return serializer.save()

    def to_representation(self, value):
        return value.to_dict()


class BoxSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=['box'])
    lo = _vector()
    hi = _vector()
    require_zero_interior = serializers.BooleanField(required=False)

    def create(self, validated_data):
        return _build(IntervalBox, tuple(validated_data['lo']), tuple(validated_data['hi']))


class PolygonSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=['polygon'])
    vertices = serializers.ListField(child=_vector(2, 2), min_length=3)
    require_zero_interior = serializers.BooleanField(required=False)

    def create(self, validated_data):
        return _build(PolygonV, tuple(tuple(v) for v in validated_data['vertices']))


class BallSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=['ball'])
    center = _vector()
    radius = serializers.FloatField()
    require_zero_interior = serializers.BooleanField(required=False)

    def create(self, validated_data):
        return _build(Ball, tuple(validated_data['center']), validated_data['radius'])


class PointsSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=['points'])
    points = serializers.ListField(child=_vector(), min_length=1)

    def create(self, validated_data):
        points = validated_data['points']
        if len({len(p) for p in points}) != 1:
            raise serializers.ValidationError({'points': ['All points must have the same dimension']})
        return _build(FinitePoints, tuple(tuple(p) for p in points))


SET_SERIALIZERS = {
    'box': BoxSerializer,
    'polygon': PolygonSerializer,
    'ball': BallSerializer,
    'points': PointsSerializer,
}


class SetSpecField(_Dispatch):
    label_text = 'set'

    def __init__(self, gauge=False, **kwargs):
        self.gauge = gauge
        super().__init__(**kwargs)

    def registry(self):
        return SET_SERIALIZERS

    def to_internal_value(self, data):
        if not self.gauge and isinstance(data, dict) and 'require_zero_interior' in data:
            raise serializers.ValidationError("require_zero_interior only applies to gauge sets")
        if self.gauge and isinstance(data, dict) and data.get('require_zero_interior') is False:
            raise serializers.ValidationError("A gauge set must contain the origin in its interior")
        return super().to_internal_value(data)


class FuncSpecField(_Dispatch):
    label_text = 'function'

    def registry(self):
        return FUNC_SERIALIZERS


class NormSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=['norm'])
    p = serializers.JSONField(required=False, default=2)

    def validate_p(self, value):
        if value in (1, 2, 'inf'):
            return value
        raise serializers.ValidationError("p must be 1, 2 or 'inf'")

    def create(self, validated_data):
        return _build(NormP, validated_data['p'])


class SquaredNormSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=['sq'])
    alpha = serializers.FloatField(required=False, default=1.0)

    def create(self, validated_data):
        return _build(ScaledSquaredNorm, validated_data['alpha'])


class IndicatorSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=['indicator'])
    set = SetSpecField()

    def create(self, validated_data):
        return Indicator(validated_data['set'])


class GaugeSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=['gauge'])
    set = SetSpecField(gauge=True)

    def create(self, validated_data):
        shape = validated_data['set']
        if isinstance(shape, FinitePoints):
            raise serializers.ValidationError({'set': ['A gauge set must be a box, polygon or ball']})
        return GaugeOf(_build(GaugeSet, shape))


class PieceField(serializers.Field):
    """One max-affine piece: [[slope...], intercept]."""

    def to_internal_value(self, data):
        if not (isinstance(data, list) and len(data) == 2 and isinstance(data[0], list)):
            raise serializers.ValidationError("A piece is [[slope...], intercept]")
        slope = _vector().run_validation(data[0])
        intercept = serializers.FloatField().run_validation(data[1])
        return tuple(slope), intercept

    def to_representation(self, value):
        return [list(value[0]), value[1]]


class MaxAffineSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=['max_affine'])
    pieces = serializers.ListField(child=PieceField(), min_length=1)

    def create(self, validated_data):
        return _build(MaxAffine, tuple(validated_data['pieces']))


class SumSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=['sum'])
    terms = serializers.ListField(child=FuncSpecField(), min_length=1)

    def create(self, validated_data):
        return _build(Sum, tuple(validated_data['terms']))


class ShiftSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=['shift'])
    inner = FuncSpecField()
    offset = _vector()

    def create(self, validated_data):
        return _build(Shift, validated_data['inner'], tuple(validated_data['offset']))


FUNC_SERIALIZERS = {
    'norm': NormSerializer,
    'sq': SquaredNormSerializer,
    'indicator': IndicatorSerializer,
    'gauge': GaugeSerializer,
    'max_affine': MaxAffineSerializer,
    'sum': SumSerializer,
    'shift': ShiftSerializer,
}


class GridField(serializers.Field):
    """Grid as ``"lo:hi:n[,lo:hi:n]"`` or ``{"lo": [...], "hi": [...], "n": [...]}``."""

    def to_internal_value(self, data):
        if isinstance(data, str):
            return _build(Grid.parse, data)
        if isinstance(data, dict) and set(data) == {'lo', 'hi', 'n'}:
            lo = _vector().run_validation(data['lo'])
            hi = _vector().run_validation(data['hi'])
            n = serializers.ListField(child=serializers.IntegerField(), min_length=1, max_length=2).run_validation(
                data['n'])
            return _build(Grid, tuple(lo), tuple(hi), tuple(n))
        raise serializers.ValidationError("Grid must be 'lo:hi:n' or an object with lo, hi and n")

    def to_representation(self, value):
        return value.describe()


class VecSetSerializer(StrictSerializer):
    """Closed-form expected set: empty, interval, polygon, ball, cone or sector."""
    kind = serializers.ChoiceField(choices=['empty', 'interval', 'polygon', 'ball', 'cone', 'sector'])
    dim = serializers.IntegerField(required=False, min_value=1, max_value=2)
    lo = ExtFloatField(required=False)
    hi = ExtFloatField(required=False)
    vertices = serializers.ListField(child=_vector(2, 2), required=False, min_length=1)
    center = _vector(required=False)
    radius = serializers.FloatField(required=False, min_value=0)
    rays = serializers.ListField(child=_vector(2, 2), required=False)
    whole = serializers.BooleanField(required=False)

    REQUIRED = {
        'empty': (),
        'interval': ('lo', 'hi'),
        'polygon': ('vertices',),
        'ball': ('center', 'radius'),
        'cone': (),
        'sector': ('rays', 'radius'),
    }

    def validate(self, data):
        missing = [key for key in self.REQUIRED[data['kind']] if key not in data]
        if missing:
            raise serializers.ValidationError({key: ['This field is required.'] for key in missing})
        if data['kind'] == 'cone' and not data.get('whole') and not data.get('rays'):
            raise serializers.ValidationError({'rays': ['A cone needs rays or whole = true']})
        return data

    def create(self, validated_data):
        try:
            return from_dict(validated_data)
        except (ValueError, InfConvError) as e:
            raise serializers.ValidationError(str(e))


class VecSetField(serializers.Field):
    def to_internal_value(self, data):
        serializer = VecSetSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        return serializer.save()

    def to_representation(self, value):
        return value.to_dict()


class ExpectedSetSerializer(StrictSerializer):
    point = _vector()
    set = VecSetField()


class CheckCaseSerializer(StrictSerializer):
    id = serializers.CharField(max_length=100)
    f = FuncSpecField()
    phi = FuncSpecField()
    grid = GridField()
    points = serializers.ListField(child=_vector(), required=False, default=list)
    ell = serializers.FloatField(required=False, allow_null=True, min_value=0, default=None)
    m = serializers.FloatField(required=False, allow_null=True, min_value=0, default=None)
    amp_alpha = serializers.FloatField(required=False, allow_null=True, min_value=0, default=None)
    expected = serializers.ListField(child=ExpectedSetSerializer(), required=False, default=list)
    tolerances = serializers.DictField(child=serializers.FloatField(min_value=0), required=False, default=dict)

    def validate_tolerances(self, value):
        unknown = sorted(set(value) - set(get_tolerances()))
        if unknown:
            raise serializers.ValidationError(f"Unknown tolerance keys: {', '.join(unknown)}")
        return value

    def create(self, validated_data):
        case = _build(ConvCase, validated_data['f'], validated_data['phi'], validated_data['grid'])
        expected = {tuple(item['point']): item['set'] for item in validated_data['expected']}
        return _build(CheckCase, validated_data['id'], case, [tuple(p) for p in validated_data['points']],
                      ell=validated_data['ell'], m=validated_data['m'], amp_alpha=validated_data['amp_alpha'],
                      expected=expected, tolerances=validated_data['tolerances'])


class ReportRecordSerializer(StrictSerializer):
    check = serializers.CharField()
    anchor = serializers.CharField(allow_blank=True)
    case = serializers.CharField()
    point = serializers.JSONField(allow_null=True)
    verdict = serializers.ChoiceField(choices=VERDICTS)
    mode = serializers.CharField()
    measured = serializers.JSONField()
    tolerance = serializers.JSONField(allow_null=True)
    margin = serializers.JSONField(allow_null=True)
    note = serializers.CharField(allow_blank=True)


class ReportSerializer(StrictSerializer):
    """A report file written by the check command."""
    corpus = serializers.CharField()
    seed = serializers.IntegerField()
    fingerprint = serializers.CharField()
    summary = serializers.DictField(child=serializers.IntegerField(min_value=0))
    records = ReportRecordSerializer(many=True)


def load_corpus(data, name='custom'):
    """
    Build a Corpus from a JSON array of CheckCase objects.

    A case that fails validation becomes a MalformedCase, so the rest of the
    corpus still runs and the failure shows up as an error record.
    """
    if not isinstance(data, list):
        raise serializers.ValidationError("A corpus must be a JSON array of cases")
    cases = []
    for position, item in enumerate(data):
        serializer = CheckCaseSerializer(data=item)
        case_id = item.get('id') if isinstance(item, dict) and isinstance(item.get('id'), str) else f'case-{position}'
        if not serializer.is_valid():
            cases.append(MalformedCase(case_id, f"invalid case: {dict(serializer.errors)}"))
            continue
        try:
            cases.append(serializer.save())
        except serializers.ValidationError as e:
            cases.append(MalformedCase(case_id, f"invalid case: {e.detail}"))
    return Corpus(name, cases)


def parse_funcspec(data):
    """FuncSpec from its JSON form; raises rest_framework ValidationError."""
    return FuncSpecField().run_validation(data)


def parse_setspec(data):
    return SetSpecField().run_validation(data)


def parse_gauge_set(data):
    """Dynamics set F of a minimal-time function."""
    shape = SetSpecField(gauge=True).run_validation(data)
    if isinstance(shape, FinitePoints):
        raise serializers.ValidationError("A dynamics set must be a box, polygon or ball")
    return _build(GaugeSet, shape)


class CheckResultSerializer(serializers.ModelSerializer):
    check = serializers.CharField(source='check_name')

    class Meta:
        model = CheckResult
        fields = ['check', 'anchor', 'case', 'point', 'verdict', 'mode', 'measured', 'tolerance', 'margin', 'note']
