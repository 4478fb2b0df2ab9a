int main(void) {
  char buf[16];
  int ok = 1;
  gets(buf);
  if (buf[0] == 'q')
    ok = 0;
  return ok;
}
