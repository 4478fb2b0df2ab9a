#include <sys/socket.h>

int handle(int sock, char *out) {
  char packet[64];
  int got = recv(sock, packet, 64, 0);
  int unrelated = 7;
  if (got <= 0)
    return -1;
  int size = got - 4;
  memcpy(out, packet + 4, size);
  return unrelated;
}
