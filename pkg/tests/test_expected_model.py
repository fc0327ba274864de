"""Value-or-error container model: exclusivity, ownership, and footprint."""

import pytest

from errbridge.expected_model import (
    STORAGE_DISCRIMINANT_BYTES,
    STORAGE_SLOT_BYTES,
    ExpectedModel,
    ModelTrap,
    OptionalModel,
)
from errbridge.idl.serialize import serialize_module
from errbridge.runtime import Runtime, int64


@pytest.fixture
def thrown(division_module):
    runtime = Runtime()
    module_id = runtime.eb_load_module(serialize_module(division_module))
    result = runtime.eb_invoke(module_id, 0, [int64(1), int64(0)])
    assert result.status == 1
    return runtime, result.error


# -- exclusivity ---------------------------------------------------------------


def test_value_state_has_no_error(thrown):
    model = ExpectedModel.from_value(int64(7))
    assert model.has_value()
    assert model.value() == int64(7)
    with pytest.raises(ModelTrap, match="error"):
        model.error()
    model.destroy()


def test_error_state_has_no_value(thrown):
    runtime, handle = thrown
    model = ExpectedModel.from_error(handle, runtime)
    assert not model.has_value()
    assert model.error() == handle
    with pytest.raises(ModelTrap, match="value"):
        model.value()
    model.destroy()
    assert runtime.eb_live_errors() == 0


def test_exactly_one_alternative_is_ever_inhabited(thrown):
    runtime, handle = thrown
    for model in (
        ExpectedModel.from_value(int64(1)),
        ExpectedModel.from_error(handle, runtime),
    ):
        assert model.has_value() != (not model.has_value())
        if model.has_value():
            with pytest.raises(ModelTrap):
                model.error()
        else:
            with pytest.raises(ModelTrap):
                model.value()
        model.destroy()


# -- ownership ------------------------------------------------------------------


def test_from_error_adopts_the_callers_reference(thrown):
    runtime, handle = thrown
    assert runtime.refcount(handle) == 1
    model = ExpectedModel.from_error(handle, runtime)
    # Adoption: no retain happened, the reference moved in.
    assert runtime.refcount(handle) == 1
    model.destroy()
    assert runtime.eb_live_errors() == 0


def test_error_accessor_borrows(thrown):
    runtime, handle = thrown
    model = ExpectedModel.from_error(handle, runtime)
    for _ in range(3):
        assert model.error() == handle
    assert runtime.refcount(handle) == 1
    model.destroy()


def test_from_error_rejects_the_null_handle():
    with pytest.raises(ModelTrap, match="null"):
        ExpectedModel.from_error(0, Runtime())


def test_destroy_releases_exactly_once(thrown):
    runtime, handle = thrown
    retained = runtime.eb_error_retain(handle)
    model = ExpectedModel.from_error(retained, runtime)
    assert runtime.refcount(handle) == 2
    model.destroy()
    assert runtime.refcount(handle) == 1
    runtime.eb_error_release(handle)
    assert runtime.eb_live_errors() == 0


def test_use_after_destroy_traps(thrown):
    runtime, handle = thrown
    model = ExpectedModel.from_error(handle, runtime)
    model.destroy()
    for access in (model.has_value, model.value, model.error, model.destroy):
        with pytest.raises(ModelTrap, match="destroy"):
            access()


def test_context_manager_destroys_on_exit(thrown):
    runtime, handle = thrown
    with ExpectedModel.from_error(handle, runtime) as model:
        assert not model.has_value()
    assert runtime.eb_live_errors() == 0
    with pytest.raises(ModelTrap):
        model.has_value()


def test_context_manager_respects_an_early_destroy(thrown):
    runtime, handle = thrown
    with ExpectedModel.from_error(handle, runtime) as model:
        model.destroy()
    assert runtime.eb_live_errors() == 0


# -- storage --------------------------------------------------------------------


def test_storage_is_one_slot_plus_a_discriminant():
    assert STORAGE_SLOT_BYTES == 8
    assert STORAGE_DISCRIMINANT_BYTES == 1
    model = ExpectedModel.from_value(int64(1))
    assert model.storage_footprint() == 9
    model.destroy()


def test_slot_is_reused_across_states(thrown):
    runtime, handle = thrown
    value_model = ExpectedModel.from_value(int64(42))
    error_model = ExpectedModel.from_error(handle, runtime)
    assert value_model.slot_contents() == ("value", int64(42))
    assert error_model.slot_contents() == ("error", handle)
    value_model.destroy()
    error_model.destroy()


# -- optional ---------------------------------------------------------------------


def test_optional_some_round_trips():
    optional = OptionalModel.some(3)
    assert optional.is_some()
    assert optional.get() == 3


def test_optional_none_traps_on_get():
    optional = OptionalModel.none()
    assert not optional.is_some()
    with pytest.raises(ModelTrap, match="empty"):
        optional.get()
