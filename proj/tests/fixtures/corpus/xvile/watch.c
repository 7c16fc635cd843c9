#include "signal_fixture.h"

extern int errno;

static pid_t spawn_editor(void);
static int wait_status(pid_t pid);

static void watch_child(void)
{
    pid_t cpid = spawn_editor();
    int child = wait_status(cpid);

    if (child < 0 && errno == EINTR) {
        kill(SIGKILL, cpid);
    }
}
