unsigned int wrapped(unsigned int a, unsigned int b)
{
    unsigned int sum = a + b;
    unsigned int masked = sum & 0xffffffff;
    return masked >> 1;
}
