#include <string.h>

/* copies a name into a fixed buffer */
void copy_name(const char *name) {
  char buf[32];
  int n = 0;
  size_t len = strlen(name);
  n = n + 1;
  if (len > 31)
    return;
  strcpy(buf, name); // sink
  printf("%s %d\n", buf, n);
}
