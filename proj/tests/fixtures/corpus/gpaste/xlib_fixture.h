typedef struct _XDisplay Display;
typedef int Bool;

extern Bool XQueryExtension(Display*, const char*, int*, int* /* first_event_return */, int* /* first_error_return */);
