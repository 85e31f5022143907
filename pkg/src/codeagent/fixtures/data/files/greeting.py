def greet_user(name):
    return "Hello " + name


def farewell_user(name):
    return "Bye " + name
