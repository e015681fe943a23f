const char *greeting = "hello" " " "world";
const char *mixed = "line one\n" "line two";

int lengths(void)
{
    return sizeof "abc";
}
