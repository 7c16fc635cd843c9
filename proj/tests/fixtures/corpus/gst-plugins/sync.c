#include "gstutils_fixture.h"

guint64 clip_running_time(guint64 diff, gint denom_rate, gint num_rate)
{
    diff = gst_util_uint64_scale_int (diff, denom_rate, num_rate);
    return diff;
}
