int printf_like(const char *fmt, ...);

int uses_fixed(int a)
{
    return a * 2;
}
